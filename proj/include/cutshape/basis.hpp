#pragma once

#include <array>
#include <vector>

#include "cutshape/common.hpp"
#include "cutshape/mesh.hpp"

namespace cutshape {

/// Degree-k Lagrange basis on the unit grid cell, in local coordinates
/// s = (x - cell_corner) / h. Triangles span the full polynomial space P_k,
/// quadrilaterals the tensor space Q_k. Each basis function is stored by its
/// monomial coefficients, so mixed partial derivatives of any order are exact.
class LagrangeBasis {
 public:
  LagrangeBasis(ElementShape shape, int k);

  int size() const { return static_cast<int>(lattice_.size()); }
  int degree() const { return k_; }
  ElementShape shape() const { return shape_; }
  const std::vector<std::array<int, 2>>& lattice() const { return lattice_; }

  Vector values(const Vec2& s) const;
  /// d^dx/ds^dx d^dy/dt^dy of every basis function at s.
  Vector derivative(const Vec2& s, int dx, int dy) const;
  /// Local-coordinate gradients, one row per basis function.
  Eigen::Matrix<double, Eigen::Dynamic, 2> gradients(const Vec2& s) const;
  /// j-th directional derivative along `n`, sum_a C(j,a) n_x^a n_y^(j-a)
  /// d^a/ds^a d^(j-a)/dt^(j-a).
  Vector directional_derivative(const Vec2& s, const Vec2& n, int j) const;

 private:
  Eigen::RowVectorXd monomial_row(const Vec2& s, int dx, int dy) const;

  ElementShape shape_;
  int k_;
  std::vector<std::array<int, 2>> lattice_;
  std::vector<std::array<int, 2>> exponents_;
  Matrix coefficients_;  // monomials x basis functions
};

/// The three element shapes at one degree.
class BasisSet {
 public:
  explicit BasisSet(int k);
  const LagrangeBasis& operator[](ElementShape shape) const {
    return bases_[static_cast<int>(shape)];
  }
  int degree() const { return bases_[0].degree(); }

 private:
  std::vector<LagrangeBasis> bases_;
};

}  // namespace cutshape
