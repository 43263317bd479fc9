#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <random>

#include "cutshape/levelset.hpp"
#include "cutshape/quadrature.hpp"
#include "oracles.hpp"

using namespace cutshape;

TEST_CASE("volume rules on simple regions") {
  const std::vector<Vec2> clipped{{0, 0}, {0.5, 0}, {0, 0.5}};
  CHECK(volume_rule(clipped, 2).measure() == doctest::Approx(0.125));

  const auto t = triangle_rule({0, 0}, {1, 0}, {0, 1}, 1);
  CHECK(t.integrate([](const Vec2& p) { return p.x(); }) == doctest::Approx(1.0 / 6.0));

  const std::vector<Vec2> square{{0, 0}, {1, 0}, {1, 1}, {0, 1}};
  const auto s = volume_rule(square, 4);
  CHECK(s.integrate([](const Vec2& p) { return p.x() * p.x() * p.y() * p.y(); }) ==
        doctest::Approx(1.0 / 9.0).epsilon(1e-13));
  CHECK(square_rule({0, 0}, 1.0, 2).integrate([](const Vec2& p) {
    return p.x() * p.x() * p.y() * p.y();
  }) == doctest::Approx(1.0 / 9.0).epsilon(1e-13));
}

TEST_CASE("line rules") {
  CHECK(line_rule({0, 0}, {1, 0}, 0).measure() == doctest::Approx(1.0));
  CHECK(line_rule({0, 0}, {1, 0}, 3).integrate([](const Vec2& p) { return std::pow(p.x(), 3); }) ==
        doctest::Approx(0.25));
  CHECK(line_rule({0, 0}, {0, 2}, 1).integrate([](const Vec2& p) { return p.y(); }) ==
        doctest::Approx(2.0));
}

TEST_CASE("face rule weights sum to the face length") {
  const Mesh m = build_background_mesh(DesignDomain::rectangle(1, 1), 0.25, ElementKind::quadrilateral);
  for (std::size_t f = 0; f < m.interior_faces.size(); ++f)
    CHECK(face_rule(m, static_cast<int>(f), 3).measure() == doctest::Approx(0.25));
}

TEST_CASE("gauss-legendre integrates degree 2n-1") {
  for (int n = 1; n <= 8; ++n) {
    const auto& [x, w] = gauss_legendre(n);
    for (int d = 0; d <= 2 * n - 1; ++d) {
      double s = 0;
      for (int i = 0; i < n; ++i) s += w[i] * std::pow(x[i], d);
      const double exact = d % 2 ? 0.0 : 2.0 / (d + 1);
      CHECK(s == doctest::Approx(exact).epsilon(1e-13));
    }
  }
}

TEST_CASE("triangle rule is exact for total degree against the barycentric oracle") {
  std::mt19937 rng(7);
  std::uniform_real_distribution<double> U(-1, 1);
  for (int trial = 0; trial < 20; ++trial) {
    const Vec2 a(U(rng), U(rng)), b(U(rng), U(rng)), c(U(rng), U(rng));
    for (int deg = 0; deg <= 8; ++deg) {
      const auto rule = triangle_rule(a, b, c, deg);
      for (int i = 0; i <= deg; ++i) {
        const int j = deg - i;
        const double got = rule.integrate([&](const Vec2& p) { return std::pow(p.x(), i) * std::pow(p.y(), j); });
        CHECK(std::abs(got - oracle::triangle_monomial(a, b, c, i, j)) < 1e-12);
      }
    }
  }
}

TEST_CASE("clipped polygons from random level-set values") {
  std::mt19937 rng(11);
  std::uniform_real_distribution<double> U(-1, 1);
  const std::vector<Vec2> quad{{0, 0}, {1, 0}, {1, 1}, {0, 1}};
  int checked = 0;
  for (int trial = 0; trial < 100; ++trial) {
    const double vals[4] = {U(rng), U(rng), U(rng), U(rng)};
    const FineCut cut = clip_element(quad, vals);
    for (const auto& poly : cut.polygons) {
      const auto rule = volume_rule(poly, 4);
      for (int i = 0; i <= 4; ++i)
        for (int j = 0; i + j <= 4; ++j) {
          const double got = rule.integrate([&](const Vec2& p) { return std::pow(p.x(), i) * std::pow(p.y(), j); });
          CHECK(std::abs(got - oracle::polygon_monomial(poly, i, j)) < 1e-12);
        }
      ++checked;
    }
  }
  CHECK(checked > 50);
}

TEST_CASE("tiny polygons are dropped") {
  const std::vector<Vec2> sliver{{0, 0}, {1, 0}, {0, 1e-16}};
  CHECK(volume_rule(sliver, 2, 1e-14).empty());
  CHECK(polygon_area(std::vector<Vec2>{{0, 0}, {1, 0}, {1, 1}}) == doctest::Approx(0.5));
  CHECK(polygon_area(std::vector<Vec2>{{0, 0}, {1, 1}, {1, 0}}) == doctest::Approx(-0.5));
}
