#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <algorithm>
#include <cmath>
#include <random>

#include "cutshape/levelset.hpp"
#include "cutshape/linear_space.hpp"

using namespace cutshape;

namespace {

LevelSetField sample(const Mesh& m, const std::function<double(const Vec2&)>& f) {
  LevelSetField phi(m.num_vertices());
  for (int v = 0; v < m.num_vertices(); ++v) phi[v] = f(m.vertices[v]);
  return phi;
}

BoundarySpec left_support() {
  BoundarySpec b;
  b.dirichlet.push_back({{0, 0}, {0, 1}});
  return b;
}

}  // namespace

TEST_CASE("positive level set: everything inside") {
  const RefinedMesh r = refine_uniform(
      build_background_mesh(DesignDomain::rectangle(1, 1), 0.25, ElementKind::quadrilateral), 1);
  const auto c = classify(r, sample(r.fine, [](const Vec2&) { return 1.0; }), left_support());
  CHECK(c.num_inside() == 16);
  CHECK(c.num_cut() == 0);
  CHECK(c.active_elements.size() == 16);
}

TEST_CASE("plane on a grid line") {
  const RefinedMesh r = refine_uniform(
      build_background_mesh(DesignDomain::rectangle(1, 1), 0.25, ElementKind::quadrilateral), 1);
  const auto phi = sample(r.fine, [](const Vec2& x) { return x.x() - 0.5; });
  const auto c = classify(r, phi, left_support());
  // Zero values count as material: the column [0.25, 0.5] touches the zero
  // line with its right edge only, so it has mixed signs but no area.
  CHECK(c.num_inside() == 8);
  CHECK(c.num_cut() == 4);
  CHECK(c.num_outside() == 4);
  CHECK(c.active_elements.size() == 8);
  CHECK(extract_geometry(r.fine, phi).volume() == doctest::Approx(0.5));
}

TEST_CASE("Dirichlet and Neumann face sets are disjoint") {
  const RefinedMesh r = refine_uniform(
      build_background_mesh(DesignDomain::rectangle(1, 1), 0.25, ElementKind::quadrilateral), 1);
  BoundarySpec b;
  b.dirichlet.push_back({{0, 0}, {0, 1}});
  const auto full = sample(r.fine, [](const Vec2& x) { return std::hypot(x.x() - 0.6, x.y() - 0.5) - 0.2; });
  const auto c = classify(r, full, b);
  for (int f : c.dirichlet_faces) {
    CHECK(std::find(c.neumann_faces.begin(), c.neumann_faces.end(), f) == c.neumann_faces.end());
    const auto& face = r.coarse.interior_faces[f];
    CHECK((c.near_dirichlet[face.plus] || c.near_dirichlet[face.minus]));
  }
  CHECK(!c.dirichlet_faces.empty());
  CHECK(!c.neumann_faces.empty());
  // Every stabilized face is in exactly one of the two sets.
  CHECK(c.dirichlet_faces.size() + c.neumann_faces.size() <= c.faces.size());
}

TEST_CASE("clip reference triangle") {
  const std::vector<Vec2> tri{{0, 0}, {1, 0}, {0, 1}};
  const double vals[] = {1, -1, -1};
  const FineCut cut = clip_element(tri, vals);
  CHECK(cut.status == CellStatus::cut);
  REQUIRE(cut.polygons.size() == 1);
  CHECK(cut.area == doctest::Approx(0.125));
  REQUIRE(cut.segments.size() == 1);
  const auto& s = cut.segments[0];
  const bool forward = (s.a - Vec2(0.5, 0)).norm() < 1e-14 && (s.b - Vec2(0, 0.5)).norm() < 1e-14;
  const bool backward = (s.b - Vec2(0.5, 0)).norm() < 1e-14 && (s.a - Vec2(0, 0.5)).norm() < 1e-14;
  CHECK((forward || backward));
  // Outward from the material corner at the origin.
  CHECK(s.normal.x() == doctest::Approx(std::sqrt(0.5)));
  CHECK(s.normal.y() == doctest::Approx(std::sqrt(0.5)));
}

TEST_CASE("clip: all negative") {
  const std::vector<Vec2> tri{{0, 0}, {1, 0}, {0, 1}};
  const double vals[] = {-1, -2, -0.5};
  const FineCut cut = clip_element(tri, vals);
  CHECK(cut.status == CellStatus::outside);
  CHECK(cut.polygons.empty());
  CHECK(cut.segments.empty());
}

TEST_CASE("clip: quad saddle") {
  const std::vector<Vec2> quad{{0, 0}, {1, 0}, {1, 1}, {0, 1}};
  const double vals[] = {1, -1, 1, -1};
  const FineCut cut = clip_element(quad, vals);
  CHECK(cut.segments.size() == 2);
  // Mean 0 counts as material: one hexagon joining the positive corners.
  REQUIRE(cut.polygons.size() == 1);
  CHECK(cut.area == doctest::Approx(0.75));

  // The bilinear sign region itself has area 1/2; the straight-segment
  // reconstruction between the edge crossings cannot reproduce it.
  std::mt19937 rng(3);
  std::uniform_real_distribution<double> U(0, 1);
  int inside = 0;
  const int n = 1000000;
  for (int i = 0; i < n; ++i) {
    const double s = U(rng), t = U(rng);
    if ((1 - 2 * s) * (1 - 2 * t) >= 0) ++inside;
  }
  CHECK(static_cast<double>(inside) / n == doctest::Approx(0.5).epsilon(1e-2));

  const double neg[] = {0.5, -1, 0.5, -1};
  const FineCut split = clip_element(quad, neg);
  CHECK(split.polygons.size() == 2);
  CHECK(split.segments.size() == 2);
}

TEST_CASE("clip: non-saddle quad area matches linear crossings") {
  const std::vector<Vec2> quad{{0, 0}, {1, 0}, {1, 1}, {0, 1}};
  const double vals[] = {-0.25, 0.75, 0.75, -0.25};  // crossing at x = 0.25
  const FineCut cut = clip_element(quad, vals);
  CHECK(cut.area == doctest::Approx(0.75));
  CHECK(cut.segments.size() == 1);
}

TEST_CASE("geometry of a disk") {
  for (auto kind : {ElementKind::quadrilateral, ElementKind::triangle}) {
    const Mesh m = build_background_mesh(DesignDomain::rectangle(1, 1), 0.0125, kind);
    const auto phi = sample(m, [](const Vec2& x) { return 0.3 - (x - Vec2(0.5, 0.5)).norm(); });
    const auto cut = extract_geometry(m, phi);
    CHECK(cut.volume() == doctest::Approx(M_PI * 0.09).epsilon(1e-3));
    double perimeter = 0;
    for (const auto& c : cut.cells)
      for (const auto& s : c.segments) perimeter += (s.b - s.a).norm();
    CHECK(perimeter == doctest::Approx(2 * M_PI * 0.3).epsilon(1e-3));
  }
}

TEST_CASE("initial level set") {
  const DesignDomain d = DesignDomain::rectangle(2, 1);
  const Mesh m = build_background_mesh(d, 0.1, ElementKind::quadrilateral);
  {
    const auto phi = init_levelset({}, m, d);
    CHECK(phi.minCoeff() > 0);
  }
  {
    InitialDesign one;
    one.holes.push_back({{1.0, 0.5}, 0.2});
    const auto phi = init_levelset(one, m, d);
    for (int v = 0; v < m.num_vertices(); ++v)
      CHECK(phi[v] == doctest::Approx((m.vertices[v] - Vec2(1.0, 0.5)).norm() - 0.2));
  }
  {
    InitialDesign two;
    two.holes.push_back({{0.9, 0.5}, 0.2});
    two.holes.push_back({{1.1, 0.5}, 0.2});
    const auto phi = init_levelset(two, m, d);
    for (int v = 0; v < m.num_vertices(); ++v) {
      const Vec2& x = m.vertices[v];
      CHECK(phi[v] == doctest::Approx(std::min((x - Vec2(0.9, 0.5)).norm(), (x - Vec2(1.1, 0.5)).norm()) - 0.2));
    }
  }
}

TEST_CASE("edge overlap and material interval") {
  const Segment s{{0, 0}, {0, 1}};
  auto [lo, hi] = edge_overlap({0, 0.5}, {0, 1.5}, s);
  CHECK(lo == doctest::Approx(0.0));
  CHECK(hi == doctest::Approx(0.5));
  auto [lo2, hi2] = edge_overlap({0.1, 0}, {0.1, 1}, s);
  CHECK(hi2 <= lo2);
  auto [a, b] = material_interval(-1, 1);
  CHECK(a == doctest::Approx(0.5));
  CHECK(b == doctest::Approx(1.0));
}

TEST_CASE("reinitialization: signed distance is a fixed point") {
  for (auto kind : {ElementKind::quadrilateral, ElementKind::triangle}) {
    const Mesh m = build_background_mesh(DesignDomain::rectangle(1, 1), 0.05, kind);
    const auto phi = sample(m, [](const Vec2& x) { return x.x() - 0.5 + 0.013; });
    ReinitOptions opt;
    opt.tolerance = 1e-8;
    opt.max_iterations = 500;
    const auto r = reinitialize(m, phi, opt);
    CHECK((r.phi - phi).cwiseAbs().maxCoeff() < 1e-6 * m.h);
  }
}

TEST_CASE("reinitialization: steep plane is rescaled, zero set kept") {
  const Mesh m = build_background_mesh(DesignDomain::rectangle(1, 1), 0.05, ElementKind::quadrilateral);
  const auto phi = sample(m, [](const Vec2& x) { return 4 * (x.x() - 0.5 - 0.013); });
  const auto r = reinitialize(m, phi);
  const auto band = interface_elements(m, phi);
  const LinearSpace V(m);
  for (int e = 0; e < m.num_elements(); ++e) {
    if (!band[e]) continue;
    for (int v : V.nodes(e))
      CHECK(r.phi[v] == doctest::Approx(m.vertices[v].x() - 0.513).epsilon(1e-10));
  }
  // Zero crossing along every horizontal edge that straddles x = 0.513.
  for (int v = 0; v < m.num_vertices(); ++v)
    CHECK((r.phi[v] > 0) == (phi[v] > 0));
}

TEST_CASE("reinitialization keeps the sign away from the interface") {
  std::mt19937 rng(5);
  std::uniform_real_distribution<double> U(0, 1);
  const Mesh m = build_background_mesh(DesignDomain::rectangle(1, 1), 0.05, ElementKind::triangle);
  for (int trial = 0; trial < 5; ++trial) {
    const double a = U(rng), b = U(rng), c = 2 + 3 * U(rng);
    const auto phi = sample(m, [&](const Vec2& x) {
      return std::sin(c * x.x() + a) * std::cos(c * x.y() + b) + 0.1;
    });
    const auto r = reinitialize(m, phi);
    const auto band = interface_elements(m, phi);
    std::vector<char> frozen(m.num_vertices(), 0);
    for (int e = 0; e < m.num_elements(); ++e)
      if (band[e])
        for (int l = 0; l < 3; ++l) frozen[m.elements[e][l]] = 1;
    for (int v = 0; v < m.num_vertices(); ++v)
      if (!frozen[v]) CHECK((r.phi[v] > 0) == (phi[v] > 0));
  }
}
