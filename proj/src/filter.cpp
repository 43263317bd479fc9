#include <algorithm>
#include <cmath>
#include <numeric>

#include "cutshape/shapeopt.hpp"

namespace cutshape {

namespace {

/// Union-find labels of the material graph; -1 for elements without material.
std::vector<int> component_labels(const Mesh& fine, const LevelSetField& phi,
                                  const CutGeometry& cut, int* count) {
  const int ne = fine.num_elements();
  std::vector<int> parent(ne);
  std::iota(parent.begin(), parent.end(), 0);
  auto find = [&](int x) {
    while (parent[x] != x) x = parent[x] = parent[parent[x]];
    return x;
  };
  for (const auto& face : fine.interior_faces) {
    if (cut.cells[face.plus].area <= 0.0 || cut.cells[face.minus].area <= 0.0) continue;
    const auto [lo, hi] = material_interval(phi[face.vertices[0]], phi[face.vertices[1]]);
    if (!(hi > lo)) continue;
    parent[find(face.plus)] = find(face.minus);
  }
  std::vector<int> label(ne, -1), root_label(ne, -1);
  int n = 0;
  for (int e = 0; e < ne; ++e) {
    if (cut.cells[e].area <= 0.0) continue;
    const int r = find(e);
    if (root_label[r] < 0) root_label[r] = n++;
    label[e] = root_label[r];
  }
  if (count) *count = n;
  return label;
}

}  // namespace

const char* to_string(FilterMode mode) {
  switch (mode) {
    case FilterMode::none: return "none";
    case FilterMode::geometric: return "geometric";
    case FilterMode::stiffness: return "stiffness";
  }
  return "unknown";
}

int count_components(const Mesh& fine, const LevelSetField& phi, const CutGeometry& cut) {
  int n = 0;
  component_labels(fine, phi, cut, &n);
  return n;
}

FilterResult filter_disconnected(const Mesh& fine, const LevelSetField& phi,
                                 const CutGeometry& cut, const BoundarySpec& boundary) {
  FilterResult r;
  const auto label = component_labels(fine, phi, cut, &r.components);
  std::vector<char> supported(r.components, 0);
  for (const auto& bf : fine.boundary_faces) {
    const int l = label[bf.element];
    if (l < 0) continue;
    const Vec2& p = fine.vertices[bf.vertices[0]];
    const Vec2& q = fine.vertices[bf.vertices[1]];
    const auto [mlo, mhi] = material_interval(phi[bf.vertices[0]], phi[bf.vertices[1]]);
    for (const auto& s : boundary.dirichlet) {
      const auto [lo, hi] = edge_overlap(p, q, s);
      if (std::min(hi, mhi) - std::max(lo, mlo) > 1e-12) supported[l] = 1;
    }
  }
  if (boundary.cut_boundary_dirichlet)
    for (int e = 0; e < fine.num_elements(); ++e)
      if (label[e] >= 0 && !cut.cells[e].segments.empty()) supported[label[e]] = 1;

  if (std::none_of(supported.begin(), supported.end(), [](char c) { return c != 0; }))
    throw DegenerateDomain("no material component is attached to the supports");

  r.phi = phi;
  std::vector<char> keep(fine.num_vertices(), 0);
  const int nv = fine.vertices_per_element();
  for (int e = 0; e < fine.num_elements(); ++e)
    if (label[e] >= 0 && supported[label[e]])
      for (int l = 0; l < nv; ++l) keep[fine.elements[e][l]] = 1;
  const double floor = 1e-12 * fine.h;
  for (int v = 0; v < fine.num_vertices(); ++v)
    if (!keep[v] && phi[v] >= 0.0) r.phi[v] = -std::max(std::abs(phi[v]), floor);
  for (int l = 0; l < r.components; ++l) r.removed += !supported[l];
  return r;
}

FilterResult filter_unsupported(const RefinedMesh& mesh, const LevelSetField& phi,
                                const CutGeometry& cut, const BoundarySpec& boundary) {
  const Mesh& fine = mesh.fine;
  const Mesh& coarse = mesh.coarse;
  FilterResult r;
  r.components = count_components(fine, phi, cut);

  const int ne = coarse.num_elements();
  std::vector<char> material(ne, 0);
  for (int fe = 0; fe < fine.num_elements(); ++fe)
    if (cut.cells[fe].area > 0.0) material[mesh.parent[fe]] = 1;
  std::vector<int> parent(ne);
  std::iota(parent.begin(), parent.end(), 0);
  auto find = [&](int x) {
    while (parent[x] != x) x = parent[x] = parent[parent[x]];
    return x;
  };
  // Elements sharing a coarse vertex share at least one node.
  std::vector<int> owner(coarse.num_vertices(), -1);
  const int nv = coarse.vertices_per_element();
  for (int e = 0; e < ne; ++e) {
    if (!material[e]) continue;
    for (int l = 0; l < nv; ++l) {
      int& o = owner[coarse.elements[e][l]];
      if (o < 0)
        o = e;
      else
        parent[find(e)] = find(o);
    }
  }
  std::vector<char> supported_root(ne, 0);
  for (const auto& bf : fine.boundary_faces) {
    const int e = mesh.parent[bf.element];
    if (!material[e]) continue;
    const Vec2& p = fine.vertices[bf.vertices[0]];
    const Vec2& q = fine.vertices[bf.vertices[1]];
    const auto [mlo, mhi] = material_interval(phi[bf.vertices[0]], phi[bf.vertices[1]]);
    for (const auto& s : boundary.dirichlet) {
      const auto [lo, hi] = edge_overlap(p, q, s);
      if (std::min(hi, mhi) - std::max(lo, mlo) > 1e-12) supported_root[find(e)] = 1;
    }
  }
  if (boundary.cut_boundary_dirichlet)
    for (int fe = 0; fe < fine.num_elements(); ++fe)
      if (!cut.cells[fe].segments.empty()) supported_root[find(mesh.parent[fe])] = 1;

  std::vector<char> keep_element(ne, 0), seen_root(ne, 0);
  bool any = false;
  for (int e = 0; e < ne; ++e) {
    if (!material[e]) continue;
    const int root = find(e);
    keep_element[e] = supported_root[root];
    any |= keep_element[e] != 0;
    if (!seen_root[root] && !supported_root[root]) ++r.removed;
    seen_root[root] = 1;
  }
  if (!any) throw DegenerateDomain("no material component is attached to the supports");

  r.phi = phi;
  std::vector<char> keep(fine.num_vertices(), 0);
  const int fnv = fine.vertices_per_element();
  for (int fe = 0; fe < fine.num_elements(); ++fe)
    if (keep_element[mesh.parent[fe]])
      for (int l = 0; l < fnv; ++l) keep[fine.elements[fe][l]] = 1;
  const double floor = 1e-12 * fine.h;
  for (int v = 0; v < fine.num_vertices(); ++v)
    if (!keep[v] && phi[v] >= 0.0) r.phi[v] = -std::max(std::abs(phi[v]), floor);
  return r;
}

LevelSetField apply_non_design(const Mesh& fine, const LevelSetField& phi,
                               const BoundarySpec& boundary, double width) {
  LevelSetField r = phi;
  if (!(width > 0.0)) return r;
  auto distance = [](const Vec2& x, const Segment& s) {
    const Vec2 d = s.b - s.a;
    const double t = std::clamp((x - s.a).dot(d) / d.squaredNorm(), 0.0, 1.0);
    return (x - (s.a + t * d)).norm();
  };
  std::vector<Segment> segments = boundary.dirichlet;
  for (const auto& load : boundary.loads) segments.push_back(load.segment);
  for (int v = 0; v < fine.num_vertices(); ++v)
    for (const auto& s : segments) {
      const double d = distance(fine.vertices[v], s);
      if (d < width) r[v] = std::max(r[v], width - d);
    }
  return r;
}

}  // namespace cutshape
