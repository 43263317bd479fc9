#pragma once

#include <Eigen/Dense>
#include <Eigen/Sparse>

#include <stdexcept>
#include <string>
#include <vector>

namespace cutshape {

using Vec2 = Eigen::Vector2d;
using Mat2 = Eigen::Matrix2d;
using Vector = Eigen::VectorXd;
using Matrix = Eigen::MatrixXd;
using SparseMatrix = Eigen::SparseMatrix<double>;
using Triplets = std::vector<Eigen::Triplet<double>>;

/// Nodal vector field on a mesh, one row per vertex.
using NodalVectorField = Eigen::Matrix<double, Eigen::Dynamic, 2>;

enum class ElementKind { triangle, quadrilateral };

/// Bad user input: malformed configuration, inconsistent geometry, ...
class InvalidInput : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// The material domain is empty or lost its supports.
class DegenerateDomain : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A sparse factorization failed or produced an unacceptable residual.
class SolverError : public std::runtime_error {
 public:
  SolverError(const std::string& what, int rank_deficiency = -1)
      : std::runtime_error(what), rank_deficiency_(rank_deficiency) {}

  /// Number of pivots judged numerically zero, or -1 when unknown.
  int rank_deficiency() const { return rank_deficiency_; }

 private:
  int rank_deficiency_;
};

inline const char* to_string(ElementKind kind) {
  return kind == ElementKind::triangle ? "triangle" : "quadrilateral";
}

}  // namespace cutshape
