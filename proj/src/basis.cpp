#include "cutshape/basis.hpp"

#include <cmath>

namespace cutshape {

namespace {

double falling_factorial(int p, int d) {
  double r = 1.0;
  for (int i = 0; i < d; ++i) r *= p - i;
  return r;
}

double binomial(int n, int r) {
  double c = 1.0;
  for (int i = 1; i <= r; ++i) c = c * (n - r + i) / i;
  return c;
}

}  // namespace

LagrangeBasis::LagrangeBasis(ElementShape shape, int k)
    : shape_(shape), k_(k), lattice_(lagrange_lattice(shape, k)) {
  for (int q = 0; q <= k; ++q)
    for (int p = 0; p <= k; ++p)
      if (shape == ElementShape::quad || p + q <= k) exponents_.push_back({p, q});

  const int n = size();
  Matrix vandermonde(n, n);
  for (int i = 0; i < n; ++i) {
    const Vec2 s(double(lattice_[i][0]) / k, double(lattice_[i][1]) / k);
    vandermonde.row(i) = monomial_row(s, 0, 0);
  }
  coefficients_ = vandermonde.fullPivLu().inverse();
}

Eigen::RowVectorXd LagrangeBasis::monomial_row(const Vec2& s, int dx,
                                               int dy) const {
  Eigen::RowVectorXd row(exponents_.size());
  for (std::size_t m = 0; m < exponents_.size(); ++m) {
    const auto [p, q] = exponents_[m];
    if (p < dx || q < dy) {
      row[m] = 0.0;
      continue;
    }
    row[m] = falling_factorial(p, dx) * falling_factorial(q, dy) *
             std::pow(s.x(), p - dx) * std::pow(s.y(), q - dy);
  }
  return row;
}

Vector LagrangeBasis::values(const Vec2& s) const {
  return (monomial_row(s, 0, 0) * coefficients_).transpose();
}

Vector LagrangeBasis::derivative(const Vec2& s, int dx, int dy) const {
  return (monomial_row(s, dx, dy) * coefficients_).transpose();
}

Eigen::Matrix<double, Eigen::Dynamic, 2> LagrangeBasis::gradients(
    const Vec2& s) const {
  Eigen::Matrix<double, Eigen::Dynamic, 2> g(size(), 2);
  g.col(0) = derivative(s, 1, 0);
  g.col(1) = derivative(s, 0, 1);
  return g;
}

Vector LagrangeBasis::directional_derivative(const Vec2& s, const Vec2& n,
                                             int j) const {
  Vector d = Vector::Zero(size());
  for (int a = 0; a <= j; ++a) {
    const double c = binomial(j, a) * std::pow(n.x(), a) * std::pow(n.y(), j - a);
    if (c != 0.0) d += c * derivative(s, a, j - a);
  }
  return d;
}

BasisSet::BasisSet(int k) {
  bases_.emplace_back(ElementShape::quad, k);
  bases_.emplace_back(ElementShape::lower_triangle, k);
  bases_.emplace_back(ElementShape::upper_triangle, k);
}

}  // namespace cutshape
