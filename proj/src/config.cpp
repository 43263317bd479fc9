#include "cutshape/config.hpp"

#include <fstream>
#include <set>
#include <sstream>

#include <json.hpp>

namespace cutshape {

using nlohmann::json;

namespace {

BoundarySpec traction_problem(std::vector<Segment> dirichlet, Segment loaded, Vec2 g) {
  BoundarySpec b;
  b.dirichlet = std::move(dirichlet);
  b.loads.push_back({loaded, [g](const Vec2&) { return g; }});
  return b;
}

OptimizationConfig base_config(ElementKind kind, int k, double h) {
  OptimizationConfig c;
  c.kind = kind;
  c.k = k;
  c.h = h;
  c.material = ElasticMaterial::from_young_poisson(1e4, 0.3);
  c.kappa = 35.0;
  return c;
}

[[noreturn]] void field_error(const std::string& field, const std::string& what) {
  throw InvalidInput("config field '" + field + "': " + what);
}

double number(const json& j, const std::string& field) {
  if (!j.is_number()) field_error(field, "expected a number");
  return j.get<double>();
}

int integer(const json& j, const std::string& field) {
  if (!j.is_number_integer()) field_error(field, "expected an integer");
  return j.get<int>();
}

Vec2 point(const json& j, const std::string& field) {
  if (!j.is_array() || j.size() != 2) field_error(field, "expected [x, y]");
  return {number(j[0], field), number(j[1], field)};
}

Segment segment(const json& j, const std::string& field) {
  if (!j.is_array() || j.size() != 2) field_error(field, "expected [[x, y], [x, y]]");
  Segment s{point(j[0], field), point(j[1], field)};
  if ((s.a - s.b).norm() == 0.0) field_error(field, "segment has zero length");
  return s;
}

void check_keys(const json& j, const std::string& where, std::set<std::string> allowed) {
  if (!j.is_object()) field_error(where, "expected an object");
  for (const auto& [key, value] : j.items())
    if (!allowed.count(key))
      field_error(where.empty() ? key : where + "." + key, "unknown field");
}

json to_json(const Vec2& x) { return json::array({x.x(), x.y()}); }

}  // namespace

RunConfig cantilever_preset(ElementKind kind, int k, double h) {
  RunConfig r;
  r.problem = "cantilever";
  auto& c = r.optimization;
  c = base_config(kind, k, h);
  c.domain = DesignDomain::rectangle(2.0, 1.0);
  c.boundary = traction_problem({{{0.0, 0.0}, {0.0, 1.0}}}, {{2.0, 0.4}, {2.0, 0.6}},
                                {0.0, -20.0});
  // Two rows of four holes, symmetric about the center line.
  for (double x : {0.3, 0.75, 1.2, 1.65})
    for (double y : {0.25, 0.75}) c.initial.holes.push_back({{x, y}, 0.1});
  return r;
}

RunConfig lshape_preset(ElementKind kind, int k, double h) {
  RunConfig r;
  r.problem = "lshape";
  auto& c = r.optimization;
  c = base_config(kind, k, h);
  c.domain = DesignDomain::lshape(2.0, 1.0);
  // Thin ligaments pinch here; the geometric filter would cut pieces still
  // coupled through shared nodes and stall the line search.
  c.filter = FilterMode::stiffness;
  c.boundary = traction_problem({{{0.0, 2.0}, {1.0, 2.0}}},
                                {{2.0, 5.0 / 16.0}, {2.0, 0.5}}, {0.0, -20.0});
  for (double x : {0.25, 0.75})
    for (double y : {0.25, 0.75, 1.25, 1.75}) c.initial.holes.push_back({{x, y}, 0.1});
  for (double x : {1.25, 1.75})
    for (double y : {0.25, 0.75}) c.initial.holes.push_back({{x, y}, 0.1});
  return r;
}

RunConfig parse_config(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    throw InvalidInput(std::string("config is not valid JSON: ") + e.what());
  }
  check_keys(j, "", {"problem", "element_kind", "k", "h", "material", "kappa", "domain",
                     "dirichlet", "loads", "holes", "parameters", "max_iterations",
                     "snapshot_every", "output_dir"});

  const std::string problem = j.value("problem", std::string("cantilever"));
  ElementKind kind = problem == "lshape" ? ElementKind::triangle : ElementKind::quadrilateral;
  if (j.contains("element_kind")) {
    const auto& v = j["element_kind"];
    if (v == "triangle")
      kind = ElementKind::triangle;
    else if (v == "quadrilateral" || v == "quad")
      kind = ElementKind::quadrilateral;
    else
      field_error("element_kind", "expected \"triangle\" or \"quadrilateral\"");
  }
  const int k = j.contains("k") ? integer(j["k"], "k") : (problem == "lshape" ? 2 : 1);
  const double h = j.contains("h") ? number(j["h"], "h") : 0.05;
  if (k < 1) field_error("k", "must be at least 1");
  if (!(h > 0.0)) field_error("h", "must be positive");

  RunConfig r;
  if (problem == "cantilever") {
    r = cantilever_preset(kind, k, h);
  } else if (problem == "lshape") {
    r = lshape_preset(kind, k, h);
  } else if (problem == "custom") {
    r.problem = "custom";
    r.optimization = base_config(kind, k, h);
    for (const char* required : {"domain", "dirichlet", "loads"})
      if (!j.contains(required)) field_error(required, "required for custom problems");
  } else {
    field_error("problem", "expected cantilever, lshape or custom");
  }
  auto& c = r.optimization;

  if (j.contains("material")) {
    const auto& m = j["material"];
    check_keys(m, "material", {"E", "nu"});
    const double E = m.contains("E") ? number(m["E"], "material.E") : c.material.E;
    const double nu = m.contains("nu") ? number(m["nu"], "material.nu") : c.material.nu;
    if (!(E > 0.0)) field_error("material.E", "must be positive");
    if (!(nu > 0.0 && nu < 0.5)) field_error("material.nu", "must lie in (0, 0.5)");
    c.material = ElasticMaterial::from_young_poisson(E, nu);
  }
  if (j.contains("kappa")) c.kappa = number(j["kappa"], "kappa");

  if (j.contains("domain")) {
    const auto& d = j["domain"];
    check_keys(d, "domain", {"width", "height", "void"});
    if (!d.contains("width") || !d.contains("height"))
      field_error("domain", "width and height are required");
    c.domain = DesignDomain::rectangle(number(d["width"], "domain.width"),
                                       number(d["height"], "domain.height"));
    if (d.contains("void")) {
      const auto s = segment(d["void"], "domain.void");
      c.domain.void_box = std::array<Vec2, 2>{s.a.cwiseMin(s.b), s.a.cwiseMax(s.b)};
    }
  }
  if (j.contains("dirichlet")) {
    const auto& d = j["dirichlet"];
    if (!d.is_array()) field_error("dirichlet", "expected a list of segments");
    c.boundary.dirichlet.clear();
    for (std::size_t i = 0; i < d.size(); ++i)
      c.boundary.dirichlet.push_back(segment(d[i], "dirichlet[" + std::to_string(i) + "]"));
  }
  if (j.contains("loads")) {
    const auto& l = j["loads"];
    if (!l.is_array()) field_error("loads", "expected a list");
    c.boundary.loads.clear();
    for (std::size_t i = 0; i < l.size(); ++i) {
      const std::string where = "loads[" + std::to_string(i) + "]";
      check_keys(l[i], where, {"segment", "traction"});
      if (!l[i].contains("segment") || !l[i].contains("traction"))
        field_error(where, "segment and traction are required");
      const Vec2 g = point(l[i]["traction"], where + ".traction");
      c.boundary.loads.push_back({segment(l[i]["segment"], where + ".segment"),
                                  [g](const Vec2&) { return g; }});
    }
  }
  if (j.contains("holes")) {
    const auto& hs = j["holes"];
    if (!hs.is_array()) field_error("holes", "expected a list");
    c.initial.holes.clear();
    for (std::size_t i = 0; i < hs.size(); ++i) {
      const std::string where = "holes[" + std::to_string(i) + "]";
      check_keys(hs[i], where, {"center", "radius"});
      if (!hs[i].contains("center") || !hs[i].contains("radius"))
        field_error(where, "center and radius are required");
      const double radius = number(hs[i]["radius"], where + ".radius");
      if (!(radius > 0.0)) field_error(where + ".radius", "must be positive");
      c.initial.holes.push_back({point(hs[i]["center"], where + ".center"), radius});
    }
  }
  if (j.contains("parameters")) {
    const auto& p = j["parameters"];
    check_keys(p, "parameters",
               {"c1", "c2", "gamma_D", "gamma", "T0", "non_design_width",
                "reinit_max_iterations", "reinit_tolerance", "transport_substeps",
                "filter"});
    auto positive = [&](const char* key) {
      const double v = number(p[key], std::string("parameters.") + key);
      if (!(v > 0.0)) field_error(std::string("parameters.") + key, "must be positive");
      return v;
    };
    auto non_negative = [&](const char* key) {
      const double v = number(p[key], std::string("parameters.") + key);
      if (!(v >= 0.0)) field_error(std::string("parameters.") + key, "must be non-negative");
      return v;
    };
    if (p.contains("c1")) c.c1 = positive("c1");
    if (p.contains("c2")) c.c2 = non_negative("c2");
    if (p.contains("gamma_D")) c.stabilization.gamma_D = positive("gamma_D");
    if (p.contains("gamma")) {
      const auto& g = p["gamma"];
      c.stabilization.gamma.clear();
      if (g.is_array()) {
        for (std::size_t i = 0; i < g.size(); ++i)
          c.stabilization.gamma.push_back(number(g[i], "parameters.gamma"));
      } else {
        c.stabilization.gamma.push_back(non_negative("gamma"));
      }
      for (double v : c.stabilization.gamma)
        if (!(v >= 0.0)) field_error("parameters.gamma", "must be non-negative");
      if (c.stabilization.gamma.size() != 1 && static_cast<int>(c.stabilization.gamma.size()) != k)
        field_error("parameters.gamma", "expected one value or k values");
    }
    if (p.contains("T0")) c.T0 = positive("T0");
    if (p.contains("non_design_width")) c.non_design_width = non_negative("non_design_width");
    if (p.contains("reinit_max_iterations")) {
      c.reinit.max_iterations = integer(p["reinit_max_iterations"], "parameters.reinit_max_iterations");
      if (c.reinit.max_iterations < 0)
        field_error("parameters.reinit_max_iterations", "must be non-negative");
    }
    if (p.contains("reinit_tolerance")) c.reinit.tolerance = positive("reinit_tolerance");
    if (p.contains("transport_substeps")) {
      c.transport_substeps = integer(p["transport_substeps"], "parameters.transport_substeps");
      if (c.transport_substeps < 0)
        field_error("parameters.transport_substeps", "must be non-negative");
    }
    if (p.contains("filter")) {
      const auto& f = p["filter"];
      if (f == "geometric")
        c.filter = FilterMode::geometric;
      else if (f == "stiffness")
        c.filter = FilterMode::stiffness;
      else if (f == "none")
        c.filter = FilterMode::none;
      else
        field_error("parameters.filter", "expected \"geometric\", \"stiffness\" or \"none\"");
    }
  }
  if (j.contains("max_iterations")) {
    c.max_iterations = integer(j["max_iterations"], "max_iterations");
    if (c.max_iterations < 0) field_error("max_iterations", "must be non-negative");
  }
  if (j.contains("snapshot_every")) {
    r.snapshot_every = integer(j["snapshot_every"], "snapshot_every");
    if (r.snapshot_every < 0) field_error("snapshot_every", "must be non-negative");
  }
  if (j.contains("output_dir")) {
    if (!j["output_dir"].is_string()) field_error("output_dir", "expected a string");
    r.output_dir = j["output_dir"].get<std::string>();
  }
  c = resolve_defaults(c);
  return r;
}

RunConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InvalidInput("cannot read config file " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_config(ss.str());
}

void validate(const RunConfig& r) {
  const auto c = resolve_defaults(r.optimization);
  if (c.k < 1) field_error("k", "must be at least 1");
  if (!(c.h > 0.0)) field_error("h", "must be positive");
  if (!(c.kappa >= 0.0)) field_error("kappa", "must be non-negative");
  if (c.boundary.dirichlet.empty())
    field_error("dirichlet", "at least one supported segment is required");
  try {
    build_background_mesh(c.domain, c.h, c.kind);
  } catch (const InvalidInput& e) {
    field_error("h", e.what());
  }
  auto on_boundary = [&](const Segment& s) {
    const Mesh m = build_background_mesh(c.domain, c.h, c.kind);
    double covered = 0.0;
    for (const auto& bf : m.boundary_faces) {
      const auto [lo, hi] = edge_overlap(m.vertices[bf.vertices[0]],
                                         m.vertices[bf.vertices[1]], s);
      if (hi > lo) covered += (hi - lo) * bf.length;
    }
    return std::abs(covered - (s.b - s.a).norm()) <= 1e-9 * (s.b - s.a).norm();
  };
  for (std::size_t i = 0; i < c.boundary.dirichlet.size(); ++i)
    if (!on_boundary(c.boundary.dirichlet[i]))
      field_error("dirichlet[" + std::to_string(i) + "]", "must lie on the domain boundary");
  for (std::size_t i = 0; i < c.boundary.loads.size(); ++i)
    if (!on_boundary(c.boundary.loads[i].segment))
      field_error("loads[" + std::to_string(i) + "].segment",
                  "must lie on the domain boundary");
}

std::string describe(const RunConfig& r) {
  const auto c = resolve_defaults(r.optimization);
  json j;
  j["problem"] = r.problem;
  j["element_kind"] = to_string(c.kind);
  j["k"] = c.k;
  j["h"] = c.h;
  j["material"] = {{"E", c.material.E}, {"nu", c.material.nu}, {"mu", c.material.mu},
                   {"lambda", c.material.lambda}};
  j["kappa"] = c.kappa;
  j["domain"] = {{"lower", to_json(c.domain.lower)}, {"upper", to_json(c.domain.upper)}};
  if (c.domain.void_box)
    j["domain"]["void"] = {to_json((*c.domain.void_box)[0]), to_json((*c.domain.void_box)[1])};
  j["dirichlet"] = json::array();
  for (const auto& s : c.boundary.dirichlet)
    j["dirichlet"].push_back({to_json(s.a), to_json(s.b)});
  j["loads"] = json::array();
  for (const auto& l : c.boundary.loads)
    j["loads"].push_back({{"segment", {to_json(l.segment.a), to_json(l.segment.b)}},
                          {"traction", to_json(l.traction(l.segment.a))}});
  j["holes"] = json::array();
  for (const auto& hole : c.initial.holes)
    j["holes"].push_back({{"center", to_json(hole.center)}, {"radius", hole.radius}});
  j["parameters"] = {{"c1", c.c1},
                     {"c2", c.c2},
                     {"gamma_D", c.stabilization.gamma_D},
                     {"gamma", c.stabilization.gamma},
                     {"T0", c.T0},
                     {"non_design_width", c.non_design_width},
                     {"reinit_max_iterations", c.reinit.max_iterations},
                     {"reinit_tolerance", c.reinit.tolerance},
                     {"transport_substeps", c.transport_substeps},
                     {"filter", to_string(c.filter)}};
  j["max_iterations"] = c.max_iterations;
  j["snapshot_every"] = r.snapshot_every;
  j["output_dir"] = r.output_dir;
  return j.dump(2);
}

}  // namespace cutshape
