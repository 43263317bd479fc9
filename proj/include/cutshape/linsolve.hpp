#pragma once

#include <optional>

#include <Eigen/SparseCholesky>

#include "cutshape/common.hpp"

namespace cutshape {

/// Sparse LDL^T factorization of a symmetric (possibly indefinite) matrix.
/// Solves check the residual, apply a few steps of iterative refinement and
/// throw SolverError when ||Ax - b|| > tolerance ||b||. A factored object is
/// immutable and safe for concurrent solves.
class SymmetricSolver {
 public:
  SymmetricSolver() = default;
  explicit SymmetricSolver(const SparseMatrix& A, double tolerance = 1e-9);

  Vector solve(const Vector& b) const;
  int rows() const { return static_cast<int>(A_.rows()); }
  const SparseMatrix& matrix() const { return A_; }

 private:
  SparseMatrix A_;
  Eigen::SimplicialLDLT<SparseMatrix> ldlt_;
  Vector scale_;
  double tolerance_ = 1e-9;
};

Vector factor_solve(const SparseMatrix& A, const Vector& b);

/// Number of LDL^T pivots that are numerically zero relative to the largest.
int rank_deficiency(const SparseMatrix& A);

/// Ratio |lambda|_max / |lambda|_min of a symmetric matrix from power and
/// inverse-power iteration. Infinite for singular matrices; empty when the
/// iterations do not settle within `max_iterations`.
std::optional<double> condition_estimate(const SparseMatrix& A,
                                         int max_iterations = 10000);

/// max |A - A^T| / max |A|.
double symmetry_defect(const SparseMatrix& A);

}  // namespace cutshape
