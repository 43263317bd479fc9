#include "cutshape/levelset.hpp"

#include <algorithm>
#include <cmath>

#include "cutshape/quadrature.hpp"

namespace cutshape {

double CutGeometry::volume() const {
  double v = 0.0;
  for (const auto& c : cells) v += c.area;
  return v;
}

int DomainClassification::num_inside() const {
  return static_cast<int>(std::count(status.begin(), status.end(), CellStatus::inside));
}
int DomainClassification::num_cut() const {
  return static_cast<int>(std::count(status.begin(), status.end(), CellStatus::cut));
}
int DomainClassification::num_outside() const {
  return static_cast<int>(std::count(status.begin(), status.end(), CellStatus::outside));
}

namespace {

struct WalkPoint {
  Vec2 x;
  bool on_zero;
  int vertex;  // local vertex index, -1 for edge crossings
};

Vec2 crossing(const Vec2& a, const Vec2& b, double fa, double fb) {
  const double t = fa / (fa - fb);
  return a + t * (b - a);
}

Vec2 ccw_outward(const Vec2& p, const Vec2& q) {
  const Vec2 d = q - p;
  return Vec2(d.y(), -d.x()).normalized();
}

}  // namespace

FineCut clip_element(std::span<const Vec2> vertices,
                     std::span<const double> values) {
  const int n = static_cast<int>(vertices.size());
  FineCut cut;
  std::array<bool, 4> in{};
  int n_in = 0;
  for (int i = 0; i < n; ++i) n_in += (in[i] = values[i] >= 0.0);
  const double element_area = polygon_area(vertices);
  const double min_area = 1e-14 * element_area;

  if (n_in == n) {
    cut.status = CellStatus::inside;
    cut.polygons.emplace_back(vertices.begin(), vertices.end());
    cut.area = element_area;
    return cut;
  }
  cut.status = n_in == 0 ? CellStatus::outside : CellStatus::cut;
  if (n_in == 0) return cut;

  const bool saddle = n == 4 && in[0] == in[2] && in[1] == in[3] && in[0] != in[1];
  const double mean =
      n == 4 ? 0.25 * (values[0] + values[1] + values[2] + values[3]) : 0.0;

  if (saddle && mean < 0.0) {
    // Material corners are separated: one triangle around each.
    for (int i = 0; i < 4; ++i) {
      if (!in[i] || values[i] == 0.0) continue;
      const int prev = (i + 3) % 4, next = (i + 1) % 4;
      const Vec2 c_next = crossing(vertices[i], vertices[next], values[i], values[next]);
      const Vec2 c_prev = crossing(vertices[prev], vertices[i], values[prev], values[i]);
      std::vector<Vec2> tri{vertices[i], c_next, c_prev};
      const double a = polygon_area(tri);
      if (a <= min_area) continue;
      cut.area += a;
      cut.polygons.push_back(std::move(tri));
      cut.segments.push_back({c_next, c_prev, ccw_outward(c_next, c_prev)});
    }
    return cut;
  }

  std::vector<WalkPoint> walk;
  for (int i = 0; i < n; ++i) {
    const int j = (i + 1) % n;
    if (in[i]) walk.push_back({vertices[i], values[i] == 0.0, i});
    if (in[i] != in[j]) {
      const int pos = in[i] ? i : j;
      if (values[pos] > 0.0)
        walk.push_back({crossing(vertices[i], vertices[j], values[i], values[j]), true, -1});
    }
  }
  std::vector<Vec2> polygon;
  polygon.reserve(walk.size());
  for (const auto& p : walk) polygon.push_back(p.x);
  const double area = polygon_area(polygon);
  if (polygon.size() >= 3 && area > min_area) {
    cut.area = area;
    cut.polygons.push_back(polygon);
  }
  // Boundary segments join consecutive zero-level points unless they are the
  // two ends of an element edge (handled against the neighbor).
  const int m = static_cast<int>(walk.size());
  if (cut.area > 0.0 && m >= 2) {
    for (int i = 0; i < m; ++i) {
      const auto& p = walk[i];
      const auto& q = walk[(i + 1) % m];
      if (!p.on_zero || !q.on_zero) continue;
      if (p.vertex >= 0 && q.vertex >= 0 &&
          ((p.vertex + 1) % n == q.vertex || (q.vertex + 1) % n == p.vertex))
        continue;
      if ((q.x - p.x).norm() <= 1e-14 * std::sqrt(element_area)) continue;
      cut.segments.push_back({p.x, q.x, ccw_outward(p.x, q.x)});
    }
  }
  return cut;
}

CutGeometry extract_geometry(const Mesh& fine, const LevelSetField& phi) {
  if (phi.size() != fine.num_vertices())
    throw InvalidInput("level set size does not match the mesh");
  const int nv = fine.vertices_per_element();
  CutGeometry g;
  g.cells.resize(fine.num_elements());
  std::array<Vec2, 4> x;
  std::array<double, 4> f;
  for (int e = 0; e < fine.num_elements(); ++e) {
    for (int l = 0; l < nv; ++l) {
      x[l] = fine.vertices[fine.elements[e][l]];
      f[l] = phi[fine.elements[e][l]];
    }
    g.cells[e] = clip_element(std::span<const Vec2>(x.data(), nv),
                              std::span<const double>(f.data(), nv));
  }
  // An element edge lying exactly on the zero level set belongs to the
  // boundary when the material is on this side only.
  for (int e = 0; e < fine.num_elements(); ++e) {
    auto& cell = g.cells[e];
    if (cell.area <= 0.0) continue;
    for (int l = 0; l < nv; ++l) {
      const int a = fine.elements[e][l], b = fine.elements[e][(l + 1) % nv];
      if (phi[a] != 0.0 || phi[b] != 0.0) continue;
      const int nb = fine.neighbor(e, l);
      if (nb < 0) continue;
      bool negative = false;
      for (int i = 0; i < nv; ++i) negative |= phi[fine.elements[nb][i]] < 0.0;
      if (!negative) continue;
      const Vec2& pa = fine.vertices[a];
      const Vec2& pb = fine.vertices[b];
      cell.segments.push_back({pa, pb, ccw_outward(pa, pb)});
    }
  }
  return g;
}

namespace {

struct Interval {
  double lo, hi;
  double length() const { return std::max(0.0, hi - lo); }
};

Interval intersect(const Interval& a, const Interval& b) {
  return {std::max(a.lo, b.lo), std::min(a.hi, b.hi)};
}

Interval overlap(const Vec2& p, const Vec2& q, const Segment& s) {
  const auto [lo, hi] = edge_overlap(p, q, s);
  return {lo, hi};
}

}  // namespace

std::pair<double, double> edge_overlap(const Vec2& p, const Vec2& q,
                                       const Segment& s) {
  const Vec2 d = q - p;
  const double len = d.norm();
  const double tol = 1e-10 * len;
  auto off_line = [&](const Vec2& x) {
    const Vec2 r = x - p;
    return std::abs(r.x() * d.y() - r.y() * d.x()) / len > tol;
  };
  if (off_line(s.a) || off_line(s.b)) return {0.0, 0.0};
  double ta = (s.a - p).dot(d) / (len * len);
  double tb = (s.b - p).dot(d) / (len * len);
  if (ta > tb) std::swap(ta, tb);
  return {std::max(0.0, ta), std::min(1.0, tb)};
}

std::pair<double, double> material_interval(double fp, double fq) {
  if (fp >= 0.0 && fq >= 0.0) return {0.0, 1.0};
  if (fp < 0.0 && fq < 0.0) return {0.0, 0.0};
  const double t = fp / (fp - fq);
  return fp >= 0.0 ? std::make_pair(0.0, t) : std::make_pair(t, 1.0);
}

DomainClassification classify(const RefinedMesh& mesh, const LevelSetField& phi,
                              const CutGeometry& cut,
                              const BoundarySpec& boundary) {
  const Mesh& coarse = mesh.coarse;
  const Mesh& fine = mesh.fine;
  const int ne = coarse.num_elements();
  DomainClassification c;
  c.status.resize(ne);
  c.active.assign(ne, 0);
  c.near_dirichlet.assign(ne, 0);
  c.near_neumann.assign(ne, 0);

  for (int e = 0; e < ne; ++e) {
    bool any_in = false, any_out = false;
    for (int v : mesh.element_nodes[e]) (phi[v] >= 0.0 ? any_in : any_out) = true;
    c.status[e] = !any_out ? CellStatus::inside
                           : (any_in ? CellStatus::cut : CellStatus::outside);
    double area = 0.0;
    for (int fe : mesh.children[e]) area += cut.cells[fe].area;
    c.active[e] = c.status[e] == CellStatus::inside ||
                  (c.status[e] == CellStatus::cut && area > 0.0);
    if (c.active[e]) c.active_elements.push_back(e);
  }
  if (c.active_elements.empty())
    throw DegenerateDomain("the level set describes an empty domain");

  const double eps = 1e-12;
  for (const auto& bf : fine.boundary_faces) {
    const int ce = mesh.parent[bf.element];
    const Vec2& p = fine.vertices[bf.vertices[0]];
    const Vec2& q = fine.vertices[bf.vertices[1]];
    const double fp = phi[bf.vertices[0]], fq = phi[bf.vertices[1]];

    for (std::size_t l = 0; l < boundary.loads.size(); ++l) {
      const Interval o = overlap(p, q, boundary.loads[l].segment);
      if (o.length() <= eps) continue;
      if (!c.active[ce])
        throw DegenerateDomain("loaded boundary is not attached to material");
      c.load_pieces.push_back({ce, p + o.lo * (q - p), p + o.hi * (q - p),
                               bf.normal, static_cast<int>(l)});
    }

    if (!c.active[ce]) continue;
    const auto [mlo, mhi] = material_interval(fp, fq);
    const Interval material{mlo, mhi};
    if (material.length() <= eps) continue;
    double dirichlet_length = 0.0;
    for (const auto& s : boundary.dirichlet) {
      const Interval o = intersect(material, overlap(p, q, s));
      if (o.length() <= eps) continue;
      dirichlet_length += o.length();
      c.dirichlet_pieces.push_back({ce, p + o.lo * (q - p), p + o.hi * (q - p),
                                    bf.normal, -1});
      c.near_dirichlet[ce] = 1;
    }
    if (material.length() - dirichlet_length > eps) c.near_neumann[ce] = 1;
  }

  for (int e : c.active_elements)
    for (int fe : mesh.children[e])
      for (const auto& s : cut.cells[fe].segments) {
        if (boundary.cut_boundary_dirichlet) {
          c.dirichlet_pieces.push_back({e, s.a, s.b, s.normal, -1});
          c.near_dirichlet[e] = 1;
        } else {
          c.near_neumann[e] = 1;
        }
      }

  for (int f = 0; f < static_cast<int>(coarse.interior_faces.size()); ++f) {
    const auto& face = coarse.interior_faces[f];
    if (!c.active[face.plus] || !c.active[face.minus]) continue;
    c.faces.push_back(f);
    if (c.near_dirichlet[face.plus] || c.near_dirichlet[face.minus])
      c.dirichlet_faces.push_back(f);
    else if (c.near_neumann[face.plus] || c.near_neumann[face.minus])
      c.neumann_faces.push_back(f);
  }
  return c;
}

DomainClassification classify(const RefinedMesh& mesh, const LevelSetField& phi,
                              const BoundarySpec& boundary) {
  return classify(mesh, phi, extract_geometry(mesh.fine, phi), boundary);
}

LevelSetField init_levelset(const InitialDesign& design, const Mesh& fine,
                            const DesignDomain& domain) {
  const double cap = domain.diameter();
  LevelSetField phi(fine.num_vertices());
  for (int v = 0; v < fine.num_vertices(); ++v) {
    const Vec2& x = fine.vertices[v];
    double d = cap;
    if (design.custom) {
      d = design.custom(x);
    } else {
      for (const auto& hole : design.holes)
        d = std::min(d, (x - hole.center).norm() - hole.radius);
    }
    phi[v] = std::clamp(d, -cap, cap);
  }
  return phi;
}

std::vector<char> interface_elements(const Mesh& fine, const LevelSetField& phi) {
  const int nv = fine.vertices_per_element();
  std::vector<char> flag(fine.num_elements(), 0);
  for (int e = 0; e < fine.num_elements(); ++e) {
    double lo = phi[fine.elements[e][0]], hi = lo;
    bool zero = false;
    for (int l = 0; l < nv; ++l) {
      const double f = phi[fine.elements[e][l]];
      lo = std::min(lo, f);
      hi = std::max(hi, f);
      zero |= f == 0.0;
    }
    flag[e] = zero || (lo < 0.0 && hi > 0.0);
  }
  return flag;
}

}  // namespace cutshape
