#include <algorithm>
#include <cmath>

#include "cutshape/levelset.hpp"
#include "cutshape/linear_space.hpp"
#include "cutshape/linsolve.hpp"

namespace cutshape {

namespace {

constexpr double kMinGradient = 1e-10;

/// Representative |grad phi| of a fine element: exact on triangles, the mean
/// over the 2x2 Gauss points on quads.
double mean_gradient_norm(const LinearSpace& V, const Vector& phi, int e) {
  const auto rule = V.element_rule(e, V.mesh().kind == ElementKind::triangle ? 0 : 2);
  double g = 0.0;
  for (const auto& x : rule.points) g += V.gradient(phi, e, x).norm();
  return g / static_cast<double>(rule.size());
}

}  // namespace

ReinitResult reinitialize(const Mesh& fine, const LevelSetField& phi,
                          const ReinitOptions& options) {
  if (phi.size() != fine.num_vertices())
    throw InvalidInput("level set size does not match the mesh");
  ReinitResult result;
  result.phi = phi;
  const auto iface = interface_elements(fine, phi);
  if (std::none_of(iface.begin(), iface.end(), [](char c) { return c != 0; }))
    return result;

  const LinearSpace V(fine);
  const int n = V.size();

  // Step 1: L2 projection of phi / |grad phi| on the interface elements.
  std::vector<int> fixed(n, -1);
  int n_fixed = 0;
  for (int e = 0; e < fine.num_elements(); ++e)
    if (iface[e])
      for (int v : V.nodes(e))
        if (fixed[v] < 0) fixed[v] = n_fixed++;
  Triplets t;
  Vector rhs = Vector::Zero(n_fixed);
  for (int e = 0; e < fine.num_elements(); ++e) {
    if (!iface[e]) continue;
    double g = mean_gradient_norm(V, phi, e);
    if (g < kMinGradient) {
      g = kMinGradient;
      ++result.clamped_gradients;
    }
    const auto& nodes = V.nodes(e);
    const int m = static_cast<int>(nodes.size());
    Matrix mass = Matrix::Zero(m, m);
    Vector load = Vector::Zero(m);
    const auto rule = V.element_rule(e, 2);
    for (std::size_t q = 0; q < rule.size(); ++q) {
      const Vector N = V.values(e, rule.points[q]);
      const double f = V.value(phi, e, rule.points[q]) / g;
      mass += rule.weights[q] * N * N.transpose();
      load += rule.weights[q] * f * N;
    }
    for (int i = 0; i < m; ++i) {
      rhs[fixed[nodes[i]]] += load[i];
      for (int j = 0; j < m; ++j)
        t.emplace_back(fixed[nodes[i]], fixed[nodes[j]], mass(i, j));
    }
  }
  SparseMatrix M(n_fixed, n_fixed);
  M.setFromTriplets(t.begin(), t.end());
  const Vector projected = SymmetricSolver(M).solve(rhs);
  for (int v = 0; v < n; ++v)
    if (fixed[v] >= 0) result.phi[v] = projected[fixed[v]];

  // Step 2: fixed point for |grad phi| = 1 with the interface values frozen.
  std::vector<int> free_index(n, -1);
  int n_free = 0;
  for (int v = 0; v < n; ++v)
    if (fixed[v] < 0) free_index[v] = n_free++;
  if (n_free == 0) return result;

  const SparseMatrix K = V.stiffness();
  t.clear();
  for (int k = 0; k < K.outerSize(); ++k)
    for (SparseMatrix::InnerIterator it(K, k); it; ++it)
      if (free_index[it.row()] >= 0 && free_index[it.col()] >= 0)
        t.emplace_back(free_index[it.row()], free_index[it.col()], it.value());
  SparseMatrix Kff(n_free, n_free);
  Kff.setFromTriplets(t.begin(), t.end());
  const SymmetricSolver solver(Kff);

  Vector frozen = result.phi;
  for (int v = 0; v < n; ++v)
    if (free_index[v] >= 0) frozen[v] = 0.0;
  const Vector lift = K * frozen;
  const double tol = options.tolerance * fine.h;
  const int degree = fine.kind == ElementKind::triangle ? 0 : 3;

  for (int m = 1; m <= options.max_iterations; ++m) {
    Vector load = Vector::Zero(n);
    for (int e = 0; e < fine.num_elements(); ++e) {
      const auto rule = V.element_rule(e, degree);
      const auto& nodes = V.nodes(e);
      for (std::size_t q = 0; q < rule.size(); ++q) {
        const Vec2 g = V.gradient(result.phi, e, rule.points[q]);
        const double norm = g.norm();
        if (!(norm > 0.0)) continue;
        const auto G = V.gradients(e, rule.points[q]);
        const Vector contrib = rule.weights[q] / norm * (G * g);
        for (std::size_t i = 0; i < nodes.size(); ++i) load[nodes[i]] += contrib[i];
      }
    }
    Vector b(n_free);
    for (int v = 0; v < n; ++v)
      if (free_index[v] >= 0) b[free_index[v]] = load[v] - lift[v];
    const Vector x = solver.solve(b);
    double update = 0.0;
    for (int v = 0; v < n; ++v)
      if (free_index[v] >= 0) {
        update = std::max(update, std::abs(x[free_index[v]] - result.phi[v]));
        result.phi[v] = x[free_index[v]];
      }
    result.iterations = m;
    result.last_update = update;
    if (update < tol) break;
  }
  return result;
}

}  // namespace cutshape
