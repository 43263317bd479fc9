#include "cutshape/mesh.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <map>
#include <sstream>

namespace cutshape {

DesignDomain DesignDomain::rectangle(double width, double height) {
  DesignDomain d;
  d.upper = Vec2(width, height);
  return d;
}

DesignDomain DesignDomain::lshape(double size, double notch) {
  DesignDomain d;
  d.upper = Vec2(size, size);
  d.void_box = std::array<Vec2, 2>{Vec2(size - notch, size - notch),
                                   Vec2(size, size)};
  return d;
}

double DesignDomain::area() const {
  double a = (upper - lower).prod();
  if (void_box) a -= ((*void_box)[1] - (*void_box)[0]).prod();
  return a;
}

double DesignDomain::diameter() const { return (upper - lower).norm(); }

bool DesignDomain::in_void(const Vec2& x) const {
  if (!void_box) return false;
  const auto& [lo, hi] = *void_box;
  return x.x() > lo.x() && x.x() < hi.x() && x.y() > lo.y() && x.y() < hi.y();
}

namespace {

int exact_divisions(double length, double h, const char* what) {
  const double n = length / h;
  const double rounded = std::round(n);
  if (rounded < 1.0 || std::abs(n - rounded) > 1e-9 * std::max(1.0, n)) {
    std::ostringstream msg;
    msg << what << " (" << length << ") is not an integer multiple of h = "
        << h;
    throw InvalidInput(msg.str());
  }
  return static_cast<int>(rounded);
}

Vec2 outward_normal(const Vec2& a, const Vec2& b) {
  const Vec2 d = b - a;
  return Vec2(d.y(), -d.x()).normalized();
}

Mesh build_grid(const Vec2& origin, double h, int nx, int ny,
                const std::vector<bool>& cell_active, ElementKind kind) {
  Mesh m;
  m.kind = kind;
  m.h = h;
  m.origin = origin;
  m.nx = nx;
  m.ny = ny;
  m.grid_vertex.assign((nx + 1) * (ny + 1), -1);
  m.cell_elements.assign(nx * ny, {-1, -1});

  auto gv = [&](int i, int j) -> int& { return m.grid_vertex[i + (nx + 1) * j]; };
  for (int j = 0; j < ny; ++j)
    for (int i = 0; i < nx; ++i) {
      if (!cell_active[i + nx * j]) continue;
      for (int dj = 0; dj <= 1; ++dj)
        for (int di = 0; di <= 1; ++di) gv(i + di, j + dj) = 0;
    }
  for (int j = 0; j <= ny; ++j)
    for (int i = 0; i <= nx; ++i) {
      if (gv(i, j) < 0) continue;
      gv(i, j) = static_cast<int>(m.vertices.size());
      m.vertices.emplace_back(origin.x() + i * h, origin.y() + j * h);
    }

  for (int j = 0; j < ny; ++j)
    for (int i = 0; i < nx; ++i) {
      const int cell = i + nx * j;
      if (!cell_active[cell]) continue;
      const int bl = gv(i, j), br = gv(i + 1, j);
      const int tr = gv(i + 1, j + 1), tl = gv(i, j + 1);
      if (kind == ElementKind::quadrilateral) {
        m.cell_elements[cell][0] = m.num_elements();
        m.elements.push_back({bl, br, tr, tl});
        m.shapes.push_back(ElementShape::quad);
        m.element_cell.push_back(cell);
      } else {
        m.cell_elements[cell][0] = m.num_elements();
        m.elements.push_back({bl, br, tr, -1});
        m.shapes.push_back(ElementShape::lower_triangle);
        m.element_cell.push_back(cell);
        m.cell_elements[cell][1] = m.num_elements();
        m.elements.push_back({bl, tr, tl, -1});
        m.shapes.push_back(ElementShape::upper_triangle);
        m.element_cell.push_back(cell);
      }
    }

  const int nv = m.vertices_per_element();
  m.element_faces.assign(m.elements.size(), {});
  std::map<std::pair<int, int>, std::pair<int, int>> open;  // edge -> (elem, local)
  for (int e = 0; e < m.num_elements(); ++e)
    for (int l = 0; l < nv; ++l) {
      const int a = m.elements[e][l], b = m.elements[e][(l + 1) % nv];
      const auto key = std::minmax(a, b);
      auto it = open.find(key);
      if (it == open.end()) {
        open.emplace(key, std::make_pair(e, l));
        continue;
      }
      const auto [other, other_local] = it->second;
      open.erase(it);
      InteriorFace f;
      f.plus = std::min(e, other);
      f.minus = std::max(e, other);
      const int plus_local = f.plus == e ? l : other_local;
      const auto& pe = m.elements[f.plus];
      f.vertices = {pe[plus_local], pe[(plus_local + 1) % nv]};
      const Vec2& pa = m.vertices[f.vertices[0]];
      const Vec2& pb = m.vertices[f.vertices[1]];
      f.normal = outward_normal(pa, pb);
      f.length = (pb - pa).norm();
      const int id = static_cast<int>(m.interior_faces.size());
      m.interior_faces.push_back(f);
      m.element_faces[e][l] = {false, id};
      m.element_faces[other][other_local] = {false, id};
    }
  // Remaining edges lie on the boundary; iterate elements for a stable order.
  for (int e = 0; e < m.num_elements(); ++e)
    for (int l = 0; l < nv; ++l) {
      const int a = m.elements[e][l], b = m.elements[e][(l + 1) % nv];
      if (!open.count(std::minmax(a, b))) continue;
      BoundaryFace f;
      f.vertices = {a, b};
      f.element = e;
      f.normal = outward_normal(m.vertices[a], m.vertices[b]);
      f.length = (m.vertices[b] - m.vertices[a]).norm();
      m.element_faces[e][l] = {true, static_cast<int>(m.boundary_faces.size())};
      m.boundary_faces.push_back(f);
    }
  return m;
}

}  // namespace

double Mesh::element_area(int) const {
  return kind == ElementKind::quadrilateral ? h * h : 0.5 * h * h;
}

int Mesh::locate(const Vec2& x) const {
  const Vec2 s = (x - origin) / h;
  const int i = std::clamp(static_cast<int>(std::floor(s.x())), 0, nx - 1);
  const int j = std::clamp(static_cast<int>(std::floor(s.y())), 0, ny - 1);
  if (s.x() < -1e-12 || s.y() < -1e-12 || s.x() > nx + 1e-12 ||
      s.y() > ny + 1e-12)
    return -1;
  const auto& ce = cell_elements[i + nx * j];
  if (ce[0] < 0 || kind == ElementKind::quadrilateral) return ce[0];
  const double lx = s.x() - i, ly = s.y() - j;
  return ly <= lx ? ce[0] : ce[1];
}

int Mesh::neighbor(int e, int edge) const {
  const FaceRef f = element_faces[e][edge];
  if (f.boundary) return -1;
  const auto& face = interior_faces[f.id];
  return face.plus == e ? face.minus : face.plus;
}

Mesh build_background_mesh(const DesignDomain& domain, double h,
                           ElementKind kind) {
  if (!(h > 0.0)) throw InvalidInput("mesh size h must be positive");
  const Vec2 extent = domain.upper - domain.lower;
  const int nx = exact_divisions(extent.x(), h, "domain width");
  const int ny = exact_divisions(extent.y(), h, "domain height");
  std::vector<bool> active(nx * ny, true);
  if (domain.void_box) {
    const auto& [lo, hi] = *domain.void_box;
    exact_divisions(lo.x() - domain.lower.x() + h, h, "void x offset");
    exact_divisions(lo.y() - domain.lower.y() + h, h, "void y offset");
    exact_divisions(hi.x() - lo.x(), h, "void width");
    exact_divisions(hi.y() - lo.y(), h, "void height");
    for (int j = 0; j < ny; ++j)
      for (int i = 0; i < nx; ++i) {
        const Vec2 c = domain.lower + h * Vec2(i + 0.5, j + 0.5);
        if (domain.in_void(c)) active[i + nx * j] = false;
      }
  }
  return build_grid(domain.lower, h, nx, ny, active, kind);
}

std::vector<std::array<int, 2>> lagrange_lattice(ElementShape shape, int k) {
  std::vector<std::array<int, 2>> nodes;
  for (int b = 0; b <= k; ++b)
    for (int a = 0; a <= k; ++a) {
      if (shape == ElementShape::lower_triangle && b > a) continue;
      if (shape == ElementShape::upper_triangle && b < a) continue;
      nodes.push_back({a, b});
    }
  return nodes;
}

RefinedMesh refine_uniform(const Mesh& mesh, int k) {
  if (k < 1) throw InvalidInput("polynomial degree k must be at least 1");
  RefinedMesh r;
  r.coarse = mesh;
  r.k = k;
  std::vector<bool> fine_active(mesh.nx * k * mesh.ny * k, false);
  for (int j = 0; j < mesh.ny * k; ++j)
    for (int i = 0; i < mesh.nx * k; ++i)
      fine_active[i + mesh.nx * k * j] =
          mesh.cell_elements[i / k + mesh.nx * (j / k)][0] >= 0;
  r.fine = build_grid(mesh.origin, mesh.h / k, mesh.nx * k, mesh.ny * k,
                      fine_active, mesh.kind);

  const Mesh& f = r.fine;
  r.parent.resize(f.num_elements());
  r.children.assign(mesh.num_elements(), {});
  for (int fe = 0; fe < f.num_elements(); ++fe) {
    const int fcell = f.element_cell[fe];
    const int fi = fcell % f.nx, fj = fcell / f.nx;
    const auto& ce = mesh.cell_elements[fi / k + mesh.nx * (fj / k)];
    int coarse = ce[0];
    if (mesh.kind == ElementKind::triangle) {
      const int a = fi % k, b = fj % k;
      const bool lower = f.shapes[fe] == ElementShape::lower_triangle
                             ? a >= b
                             : a > b;
      coarse = lower ? ce[0] : ce[1];
    }
    r.parent[fe] = coarse;
    r.children[coarse].push_back(fe);
  }

  r.element_nodes = lattice_nodes(mesh, k, f);
  return r;
}

std::vector<std::vector<int>> lattice_nodes(const Mesh& coarse, int k,
                                            const Mesh& fine) {
  std::vector<std::vector<int>> nodes(coarse.num_elements());
  for (int e = 0; e < coarse.num_elements(); ++e) {
    const int cell = coarse.element_cell[e];
    const int ci = cell % coarse.nx, cj = cell / coarse.nx;
    for (const auto& [a, b] : lagrange_lattice(coarse.shapes[e], k))
      nodes[e].push_back(
          fine.grid_vertex[(ci * k + a) + (fine.nx + 1) * (cj * k + b)]);
  }
  return nodes;
}

FaceOrientation face_jump_orientation(const Mesh& mesh, FaceRef face) {
  if (face.boundary)
    throw InvalidInput("jump orientation requested for a boundary face");
  if (face.id < 0 || face.id >= static_cast<int>(mesh.interior_faces.size()))
    throw InvalidInput("face id out of range");
  const auto& f = mesh.interior_faces[face.id];
  return {f.plus, f.minus, f.normal};
}

void write_mesh_vtk(const Mesh& mesh, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw InvalidInput("cannot open " + path);
  const int nv = mesh.vertices_per_element();
  out << "# vtk DataFile Version 3.0\nmesh\nASCII\nDATASET UNSTRUCTURED_GRID\n";
  out << "POINTS " << mesh.num_vertices() << " double\n";
  for (const auto& v : mesh.vertices) out << v.x() << ' ' << v.y() << " 0\n";
  out << "CELLS " << mesh.num_elements() << ' '
      << mesh.num_elements() * (nv + 1) << '\n';
  for (const auto& e : mesh.elements) {
    out << nv;
    for (int l = 0; l < nv; ++l) out << ' ' << e[l];
    out << '\n';
  }
  out << "CELL_TYPES " << mesh.num_elements() << '\n';
  for (int e = 0; e < mesh.num_elements(); ++e) out << (nv == 3 ? 5 : 9) << '\n';
}

}  // namespace cutshape
