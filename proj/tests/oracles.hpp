#pragma once

// Independent reference computations used by the tests. Nothing here calls
// into the library's quadrature or assembly code.

#include <cmath>
#include <vector>

#include <Eigen/Dense>

namespace oracle {

using P = Eigen::Vector2d;

inline double factorial(int n) {
  double f = 1.0;
  for (int i = 2; i <= n; ++i) f *= i;
  return f;
}

inline double binomial(int n, int k) { return factorial(n) / (factorial(k) * factorial(n - k)); }

/// Exact integral of x^a y^b over triangle (p0, p1, p2): expand x and y in
/// barycentric coordinates and use
/// int_T l0^i l1^j l2^m = 2|T| i! j! m! / (i + j + m + 2)!.
inline double triangle_monomial(const P& p0, const P& p1, const P& p2, int a, int b) {
  const double area = 0.5 * std::abs((p1 - p0).x() * (p2 - p0).y() - (p1 - p0).y() * (p2 - p0).x());
  double sum = 0.0;
  // x^a = sum_{i+j+m=a} a!/(i!j!m!) x0^i x1^j x2^m l0^i l1^j l2^m, same for y.
  for (int i = 0; i <= a; ++i)
    for (int j = 0; i + j <= a; ++j) {
      const int m = a - i - j;
      const double cx = factorial(a) / (factorial(i) * factorial(j) * factorial(m)) *
                        std::pow(p0.x(), i) * std::pow(p1.x(), j) * std::pow(p2.x(), m);
      for (int r = 0; r <= b; ++r)
        for (int s = 0; r + s <= b; ++s) {
          const int t = b - r - s;
          const double cy = factorial(b) / (factorial(r) * factorial(s) * factorial(t)) *
                            std::pow(p0.y(), r) * std::pow(p1.y(), s) * std::pow(p2.y(), t);
          const int e0 = i + r, e1 = j + s, e2 = m + t;
          sum += cx * cy * 2.0 * area * factorial(e0) * factorial(e1) * factorial(e2) /
                 factorial(e0 + e1 + e2 + 2);
        }
    }
  return sum;
}

/// Fan from the first vertex of a convex polygon.
inline double polygon_monomial(const std::vector<P>& poly, int a, int b) {
  double sum = 0.0;
  for (std::size_t i = 1; i + 1 < poly.size(); ++i)
    sum += triangle_monomial(poly[0], poly[i], poly[i + 1], a, b);
  return sum;
}

/// Eigenvalues of a dense symmetric matrix.
inline Eigen::VectorXd symmetric_eigenvalues(const Eigen::MatrixXd& A) {
  return Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd>(A, Eigen::EigenvaluesOnly).eigenvalues();
}

}  // namespace oracle
