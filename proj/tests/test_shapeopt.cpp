#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>

#include "cutshape/config.hpp"
#include "cutshape/shapeopt.hpp"

using namespace cutshape;

namespace {

OptimizationConfig small_cantilever(ElementKind kind = ElementKind::quadrilateral, int k = 1) {
  auto c = cantilever_preset(kind, k, 0.1).optimization;
  return c;
}

LevelSetField sample(const Mesh& m, const std::function<double(const Vec2&)>& f) {
  LevelSetField phi(m.num_vertices());
  for (int v = 0; v < m.num_vertices(); ++v) phi[v] = f(m.vertices[v]);
  return phi;
}

}  // namespace

TEST_CASE("defaults") {
  const auto c = resolve_defaults(small_cantilever(ElementKind::triangle, 2));
  CHECK(c.c1 == doctest::Approx(3 * 0.05 * 0.05));
  CHECK(c.c2 == doctest::Approx(0.1));
  CHECK(c.kappa == doctest::Approx(35.0));
  CHECK(c.T0 == doctest::Approx(0.05 * std::sqrt(5.0)));
  CHECK(c.stabilization.gamma_D == doctest::Approx(40 * (c.material.mu + c.material.lambda)));
  CHECK(c.stabilization.gamma.size() == 2);
  CHECK(c.non_design_width == doctest::Approx(0.1));

  auto bad = small_cantilever(ElementKind::triangle, 2);
  bad.stabilization.gamma = {1.0, 2.0, 3.0};
  CHECK_THROWS_AS(resolve_defaults(bad), InvalidInput);
  bad.stabilization.gamma = {1.0};
  CHECK(resolve_defaults(bad).stabilization.gamma == std::vector<double>{1.0, 1.0});
}

TEST_CASE("shape derivative identities") {
  for (auto kind : {ElementKind::quadrilateral, ElementKind::triangle}) {
    const Optimizer opt(small_cantilever(kind, 1 + (kind == ElementKind::triangle)));
    const auto ev = opt.evaluate(opt.initial_levelset());
    const auto dJ = opt.shape_derivative(ev);
    const double kappa = opt.config().kappa;
    const double scale = kappa * ev.value.volume + ev.value.compliance;
    const Mesh& fine = opt.mesh().fine;

    const double translation = apply(dJ, interpolate(fine, [](const Vec2&) { return Vec2(1, 0); }));
    CHECK(std::abs(translation) < 1e-10 * scale);
    const double dilation = apply(dJ, interpolate(fine, [](const Vec2& x) { return x; }));
    CHECK(dilation == doctest::Approx(2 * kappa * ev.value.volume).epsilon(1e-10));

    // Without displacement only the volume term remains: kappa int div theta.
    const Vector zero = Vector::Zero(ev.space->num_dofs());
    const auto dV = shape_derivative(*ev.space, zero, opt.config().material, kappa, ev.cut);
    const auto theta = interpolate(fine, [](const Vec2& x) { return Vec2(2 * x.x() + x.y(), 3 * x.y() - x.x()); });
    CHECK(apply(dV, theta) == doctest::Approx(5 * kappa * ev.value.volume).epsilon(1e-10));
  }
}

TEST_CASE("velocity") {
  const Optimizer opt(small_cantilever());
  const auto ev = opt.evaluate(opt.initial_levelset());
  const auto dJ = opt.shape_derivative(ev);
  const Velocity v = opt.velocity().solve(dJ);
  CHECK_FALSE(v.stationary);
  CHECK(opt.velocity().inner(v.beta, v.beta) == doctest::Approx(1.0));
  CHECK(apply(dJ, v.beta) < 0);
  CHECK(apply(dJ, v.beta) == doctest::Approx(-v.b_norm).epsilon(1e-8));
  // Normal components vanish on the design-domain boundary.
  const Mesh& fine = opt.mesh().fine;
  for (int n = 0; n < fine.num_vertices(); ++n) {
    const Vec2& x = fine.vertices[n];
    if (x.x() == 0.0 || x.x() == 2.0) CHECK(v.beta(n, 0) == 0.0);
    if (x.y() == 0.0 || x.y() == 1.0) CHECK(v.beta(n, 1) == 0.0);
  }
  const Velocity none = opt.velocity().solve(NodalVectorField::Zero(fine.num_vertices(), 2));
  CHECK(none.stationary);
}

TEST_CASE("transport") {
  const Mesh fine = build_background_mesh(DesignDomain::rectangle(1, 1), 0.05, ElementKind::triangle);
  const Transport tr(fine, 0.1);
  const auto phi = sample(fine, [](const Vec2& x) { return 0.7 * x.x() - 0.4 * x.y() + 0.1; });
  const NodalVectorField zero = NodalVectorField::Zero(fine.num_vertices(), 2);
  CHECK((tr.advance(phi, zero, 0.3, 10) - phi).norm() == 0.0);

  NodalVectorField beta(fine.num_vertices(), 2);
  beta.col(0).setConstant(0.5);
  beta.col(1).setConstant(-0.2);
  const auto moved = tr.advance(phi, beta, 0.3, 10);
  const auto exact = sample(fine, [](const Vec2& x) {
    return 0.7 * x.x() - 0.4 * x.y() + 0.1 - 0.3 * (0.5 * 0.7 + 0.2 * 0.4);
  });
  CHECK((moved - exact).cwiseAbs().maxCoeff() < 1e-10);
  CHECK(tr.substeps_for(beta, 0.3) == static_cast<int>(std::ceil(0.3 * std::hypot(0.5, 0.2) / 0.05)));
  // The jump stabilization vanishes on linear fields.
  CHECK((tr.stabilization() * phi).cwiseAbs().maxCoeff() < 1e-12);
}

TEST_CASE("filter") {
  const Mesh fine = build_background_mesh(DesignDomain::rectangle(2, 1), 0.05, ElementKind::quadrilateral);
  BoundarySpec b;
  b.dirichlet.push_back({{0, 0}, {0, 1}});
  const auto bar = [](const Vec2& x) { return 0.4 - x.x(); };
  const auto disk = [](const Vec2& x) { return 0.2 - (x - Vec2(1.5, 0.5)).norm(); };

  const auto connected = sample(fine, bar);
  const auto same = filter_disconnected(fine, connected, extract_geometry(fine, connected), b);
  CHECK(same.removed == 0);
  CHECK(same.components == 1);
  CHECK((same.phi - connected).norm() == 0.0);

  const auto both = sample(fine, [&](const Vec2& x) { return std::max(bar(x), disk(x)); });
  const auto cut = extract_geometry(fine, both);
  CHECK(count_components(fine, both, cut) == 2);
  const auto f = filter_disconnected(fine, both, cut, b);
  CHECK(f.removed == 1);
  const double disk_area = extract_geometry(fine, sample(fine, disk)).volume();
  CHECK(cut.volume() - extract_geometry(fine, f.phi).volume() == doctest::Approx(disk_area));
  for (int v = 0; v < fine.num_vertices(); ++v)
    if (fine.vertices[v].x() < 1.0) CHECK(f.phi[v] == both[v]);

  BoundarySpec right;
  right.dirichlet.push_back({{2, 0}, {2, 1}});
  CHECK_THROWS_AS(filter_disconnected(fine, connected, extract_geometry(fine, connected), right),
                  DegenerateDomain);
}

TEST_CASE("stiffness filter keeps pieces sharing coarse nodes") {
  // Two bars a fraction of a coarse element apart: geometrically separate,
  // coupled through the degree-2 space.
  const RefinedMesh r = refine_uniform(
      build_background_mesh(DesignDomain::rectangle(2, 1), 0.1, ElementKind::triangle), 2);
  BoundarySpec b;
  b.dirichlet.push_back({{0, 0}, {0, 1}});
  const auto phi = sample(r.fine, [](const Vec2& x) {
    return std::max(0.52 - x.x(), 0.17 - std::abs(x.x() - 0.785));
  });
  const auto cut = extract_geometry(r.fine, phi);
  CHECK(count_components(r.fine, phi, cut) == 2);
  CHECK(filter_disconnected(r.fine, phi, cut, b).removed == 1);
  const auto s = filter_unsupported(r, phi, cut, b);
  CHECK(s.removed == 0);
  CHECK((s.phi - phi).norm() == 0.0);

  const auto far = sample(r.fine, [](const Vec2& x) {
    return std::max(0.4 - x.x(), 0.2 - (x - Vec2(1.5, 0.5)).norm());
  });
  CHECK(filter_unsupported(r, far, extract_geometry(r.fine, far), b).removed == 1);
}

TEST_CASE("non-design strips") {
  const Mesh fine = build_background_mesh(DesignDomain::rectangle(2, 1), 0.05, ElementKind::quadrilateral);
  BoundarySpec b;
  b.dirichlet.push_back({{0, 0}, {0, 1}});
  const LevelSetField empty = LevelSetField::Constant(fine.num_vertices(), -1.0);
  const auto phi = apply_non_design(fine, empty, b, 0.1);
  for (int v = 0; v < fine.num_vertices(); ++v) {
    const double d = fine.vertices[v].x();
    CHECK(phi[v] == doctest::Approx(d < 0.1 ? 0.1 - d : -1.0));
  }
}

TEST_CASE("short optimization run decreases J") {
  auto c = small_cantilever();
  c.max_iterations = 4;
  const Optimizer opt(c);
  int records = 0;
  const auto state = opt.run({[&](const IterationRecord&) { ++records; }, {}});
  std::vector<double> accepted;
  for (const auto& r : state.history)
    if (r.accepted) accepted.push_back(r.J);
  REQUIRE(accepted.size() >= 2);
  for (std::size_t i = 1; i < accepted.size(); ++i) CHECK(accepted[i] < accepted[i - 1]);
  CHECK(records == static_cast<int>(state.history.size()));
  CHECK(state.iteration <= 4);
}
