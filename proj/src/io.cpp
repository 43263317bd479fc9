#include "cutshape/io.hpp"

#include <cstdio>

namespace cutshape {

namespace {

std::ofstream open(const std::string& path) {
  std::ofstream out(path);
  if (!out) throw InvalidInput("cannot write " + path);
  out.precision(12);
  return out;
}

}  // namespace

void write_levelset_vtk(const std::string& path, const Mesh& fine, const LevelSetField& phi,
                        const NodalVectorField* displacement, const Vector* von_mises) {
  auto out = open(path);
  const int nv = fine.vertices_per_element();
  out << "# vtk DataFile Version 3.0\nlevel set\nASCII\nDATASET UNSTRUCTURED_GRID\n";
  out << "POINTS " << fine.num_vertices() << " double\n";
  for (const auto& v : fine.vertices) out << v.x() << ' ' << v.y() << " 0\n";
  out << "CELLS " << fine.num_elements() << ' ' << fine.num_elements() * (nv + 1) << '\n';
  for (const auto& e : fine.elements) {
    out << nv;
    for (int l = 0; l < nv; ++l) out << ' ' << e[l];
    out << '\n';
  }
  out << "CELL_TYPES " << fine.num_elements() << '\n';
  for (int e = 0; e < fine.num_elements(); ++e) out << (nv == 3 ? 5 : 9) << '\n';
  out << "POINT_DATA " << fine.num_vertices() << "\nSCALARS phi double 1\nLOOKUP_TABLE default\n";
  for (int v = 0; v < phi.size(); ++v) out << phi[v] << '\n';
  if (displacement) {
    out << "VECTORS displacement double\n";
    for (int v = 0; v < displacement->rows(); ++v)
      out << (*displacement)(v, 0) << ' ' << (*displacement)(v, 1) << " 0\n";
  }
  if (von_mises) {
    out << "CELL_DATA " << fine.num_elements()
        << "\nSCALARS von_mises double 1\nLOOKUP_TABLE default\n";
    for (int e = 0; e < von_mises->size(); ++e) out << (*von_mises)[e] << '\n';
  }
}

void write_boundary_svg(const std::string& path, const Mesh& coarse, const CutGeometry& cut) {
  auto out = open(path);
  const double scale = 400.0;
  const double width = coarse.nx * coarse.h, height = coarse.ny * coarse.h;
  auto X = [&](const Vec2& p) { return (p.x() - coarse.origin.x()) * scale + 10.0; };
  auto Y = [&](const Vec2& p) { return (height - (p.y() - coarse.origin.y())) * scale + 10.0; };
  out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << width * scale + 20
      << "\" height=\"" << height * scale + 20 << "\">\n";
  out << "<g stroke=\"#cccccc\" stroke-width=\"0.5\" fill=\"none\">\n";
  for (const auto& f : coarse.interior_faces) {
    const Vec2& a = coarse.vertices[f.vertices[0]];
    const Vec2& b = coarse.vertices[f.vertices[1]];
    out << "<line x1=\"" << X(a) << "\" y1=\"" << Y(a) << "\" x2=\"" << X(b) << "\" y2=\""
        << Y(b) << "\"/>\n";
  }
  out << "</g>\n<g stroke=\"#000000\" stroke-width=\"1.5\">\n";
  for (const auto& f : coarse.boundary_faces) {
    const Vec2& a = coarse.vertices[f.vertices[0]];
    const Vec2& b = coarse.vertices[f.vertices[1]];
    out << "<line x1=\"" << X(a) << "\" y1=\"" << Y(a) << "\" x2=\"" << X(b) << "\" y2=\""
        << Y(b) << "\"/>\n";
  }
  out << "</g>\n<g fill=\"#4a6fa5\" stroke=\"none\">\n";
  for (const auto& cell : cut.cells)
    for (const auto& poly : cell.polygons) {
      out << "<polygon points=\"";
      for (const auto& p : poly) out << X(p) << ',' << Y(p) << ' ';
      out << "\"/>\n";
    }
  out << "</g>\n<g stroke=\"#c0392b\" stroke-width=\"1.5\">\n";
  for (const auto& cell : cut.cells)
    for (const auto& s : cell.segments)
      out << "<line x1=\"" << X(s.a) << "\" y1=\"" << Y(s.a) << "\" x2=\"" << X(s.b)
          << "\" y2=\"" << Y(s.b) << "\"/>\n";
  out << "</g>\n</svg>\n";
}

std::string format_record(const IterationRecord& r) {
  char buf[256];
  std::snprintf(buf, sizeof buf, "%d,%.12e,%.12e,%.12e,%.12e,%.12e,%d,%d", r.iter, r.t, r.T,
                r.J, r.compliance, r.volume, r.accepted ? 1 : 0, r.components);
  return buf;
}

IterationLog::IterationLog(const std::string& path) : out_(open(path)) {
  out_ << "iter,t,T,J,compliance,volume,accepted,components\n";
}

void IterationLog::append(const IterationRecord& record) {
  out_ << format_record(record) << '\n';
  out_.flush();
}

}  // namespace cutshape
