#include "cutshape/linsolve.hpp"

#include <Eigen/OrderingMethods>
#include <Eigen/SparseQR>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <string>
#include <limits>
#include <random>

namespace cutshape {

namespace {

/// Pivots that are exactly zero or not finite. Tiny but nonzero pivots are
/// left to the residual check: cut elements with small material fractions
/// legitimately produce them.
int count_zero_pivots(const Vector& d) {
  int n = 0;
  for (int i = 0; i < d.size(); ++i) n += !(std::abs(d[i]) > 0.0) || !std::isfinite(d[i]);
  return n;
}

/// Pivots below 1e-14 of the largest, as a numerical rank-deficiency estimate.
int count_small_pivots(const Vector& d) {
  const double dmax = d.cwiseAbs().maxCoeff();
  int n = 0;
  for (int i = 0; i < d.size(); ++i) n += !(std::abs(d[i]) > 1e-14 * dmax);
  return n;
}

std::string fmt(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.3e", x);
  return buf;
}

}  // namespace

SymmetricSolver::SymmetricSolver(const SparseMatrix& A, double tolerance)
    : A_(A), tolerance_(tolerance) {
  if (A.rows() != A.cols()) throw SolverError("matrix is not square");
  if (A.rows() == 0) return;
  // Symmetric diagonal equilibration: dofs of tiny cut elements have
  // diagonal entries many orders of magnitude below the rest.
  scale_ = Vector::Ones(A.rows());
  for (int i = 0; i < A.rows(); ++i) {
    const double d = std::abs(A.coeff(i, i));
    if (d > 0.0 && std::isfinite(d)) scale_[i] = 1.0 / std::sqrt(d);
  }
  const SparseMatrix scaled = scale_.asDiagonal() * A_ * scale_.asDiagonal();
  ldlt_.compute(scaled);
  if (ldlt_.info() != Eigen::Success)
    throw SolverError("LDL^T factorization failed (structurally singular)", -1);
  const int deficiency = count_zero_pivots(ldlt_.vectorD());
  if (deficiency > 0)
    throw SolverError("matrix is numerically singular: " +
                          std::to_string(deficiency) + " zero pivot(s)",
                      deficiency);
}

Vector SymmetricSolver::solve(const Vector& b) const {
  if (b.size() != A_.rows()) throw SolverError("right-hand side size mismatch");
  if (A_.rows() == 0) return Vector();
  const double bnorm = b.norm();
  if (bnorm == 0.0) return Vector::Zero(b.size());
  auto apply_inverse = [&](const Vector& rhs) -> Vector {
    return scale_.asDiagonal() * ldlt_.solve(scale_.asDiagonal() * rhs);
  };
  Vector x = apply_inverse(b);
  Vector r = b - A_ * x;
  for (int step = 0; step < 5 && r.norm() > 1e-14 * bnorm; ++step) {
    x += apply_inverse(r);
    r = b - A_ * x;
  }
  if (!x.allFinite() || r.norm() > tolerance_ * bnorm)
    throw SolverError("linear solve relative residual " + fmt(r.norm() / bnorm) +
                          " exceeds tolerance",
                      count_small_pivots(ldlt_.vectorD()));
  return x;
}

Vector factor_solve(const SparseMatrix& A, const Vector& b) {
  return SymmetricSolver(A).solve(b);
}

int rank_deficiency(const SparseMatrix& A) {
  Eigen::SimplicialLDLT<SparseMatrix> ldlt(A);
  if (ldlt.info() == Eigen::Success) return count_small_pivots(ldlt.vectorD());
  // LDL^T stops at an exactly zero pivot; fall back to a rank-revealing QR.
  SparseMatrix C = A;
  C.makeCompressed();
  Eigen::SparseQR<SparseMatrix, Eigen::COLAMDOrdering<int>> qr;
  double scale = 0.0;
  for (int k = 0; k < C.outerSize(); ++k)
    for (SparseMatrix::InnerIterator it(C, k); it; ++it) scale = std::max(scale, std::abs(it.value()));
  qr.setPivotThreshold(1e-14 * scale);
  qr.compute(C);
  if (qr.info() != Eigen::Success) return -1;
  return static_cast<int>(C.cols() - qr.rank());
}

std::optional<double> condition_estimate(const SparseMatrix& A,
                                         int max_iterations) {
  const int n = static_cast<int>(A.rows());
  if (n == 0) return 1.0;
  std::mt19937 rng(12345);
  std::uniform_real_distribution<double> dist(0.5, 1.5);
  Vector start(n);
  for (int i = 0; i < n; ++i) start[i] = dist(rng);
  start.normalize();

  // Rayleigh quotients converge quadratically for symmetric matrices.
  auto iterate = [&](auto&& apply) -> std::optional<double> {
    Vector x = start;
    double lambda = 0.0;
    for (int it = 0; it < max_iterations; ++it) {
      Vector y = apply(x);
      const double next = std::abs(x.dot(y));
      const double ynorm = y.norm();
      if (!(ynorm > 0.0) || !std::isfinite(ynorm)) return std::nullopt;
      x = y / ynorm;
      if (it > 2 && std::abs(next - lambda) <= 1e-8 * std::abs(next)) return next;
      lambda = next;
    }
    return std::nullopt;
  };

  const auto lmax = iterate([&](const Vector& x) { return Vector(A * x); });
  if (!lmax) return std::nullopt;
  Eigen::SimplicialLDLT<SparseMatrix> ldlt(A);
  if (ldlt.info() != Eigen::Success ||
      ldlt.vectorD().cwiseAbs().minCoeff() == 0.0)
    return std::numeric_limits<double>::infinity();
  const auto inv = iterate([&](const Vector& x) { return Vector(ldlt.solve(x)); });
  if (!inv) return std::nullopt;
  if (*inv == 0.0) return std::numeric_limits<double>::infinity();
  return *lmax * *inv;
}

double symmetry_defect(const SparseMatrix& A) {
  double amax = 0.0;
  for (int k = 0; k < A.outerSize(); ++k)
    for (SparseMatrix::InnerIterator it(A, k); it; ++it)
      amax = std::max(amax, std::abs(it.value()));
  if (amax == 0.0) return 0.0;
  const SparseMatrix d = A - SparseMatrix(A.transpose());
  double dmax = 0.0;
  for (int k = 0; k < d.outerSize(); ++k)
    for (SparseMatrix::InnerIterator it(d, k); it; ++it)
      dmax = std::max(dmax, std::abs(it.value()));
  return dmax / amax;
}

}  // namespace cutshape
