#include <cmath>
#include <limits>
#include <optional>

#include "cutshape/shapeopt.hpp"

namespace cutshape {

const char* to_string(StopReason reason) {
  switch (reason) {
    case StopReason::max_iterations: return "max_iterations";
    case StopReason::stationary: return "stationary";
    case StopReason::step_underflow: return "step_underflow";
  }
  return "unknown";
}

OptimizationConfig resolve_defaults(OptimizationConfig c) {
  if (c.k < 1) throw InvalidInput("k must be at least 1");
  if (!(c.h > 0.0)) throw InvalidInput("h must be positive");
  const double hk = c.h / c.k;
  if (!(c.c1 > 0.0)) c.c1 = 3.0 * hk * hk;
  if (!(c.T0 > 0.0)) c.T0 = 0.05 * c.domain.diameter();
  const auto defaults = Stabilization::defaults(c.material, c.k);
  if (c.stabilization.gamma_D == 0.0) c.stabilization.gamma_D = defaults.gamma_D;
  if (c.stabilization.gamma.empty()) c.stabilization.gamma = defaults.gamma;
  if (c.stabilization.gamma.size() == 1)
    c.stabilization.gamma.assign(c.k, c.stabilization.gamma[0]);
  if (static_cast<int>(c.stabilization.gamma.size()) != c.k)
    throw InvalidInput("parameters.gamma must hold 1 or k values");
  if (c.non_design_width < 0.0) c.non_design_width = 2.0 * hk;
  return c;
}

Optimizer::Optimizer(OptimizationConfig config)
    : config_(resolve_defaults(std::move(config))),
      mesh_(refine_uniform(build_background_mesh(config_.domain, config_.h, config_.kind),
                           config_.k)),
      velocity_(mesh_.fine, config_.c1),
      transport_(mesh_.fine, config_.c2) {}

LevelSetField Optimizer::initial_levelset() const {
  return apply_non_design(mesh_.fine, init_levelset(config_.initial, mesh_.fine, config_.domain),
                          config_.boundary, config_.non_design_width);
}

LevelSetField Optimizer::postprocess(const LevelSetField& phi, int* components,
                                     bool reinit) const {
  const Mesh& fine = mesh_.fine;
  LevelSetField x = apply_non_design(fine, phi, config_.boundary, config_.non_design_width);
  const CutGeometry cut = extract_geometry(fine, x);
  if (config_.filter != FilterMode::none) {
    auto f = filter(x, cut);
    if (components) *components = f.components;
    x = std::move(f.phi);
  } else if (components) {
    *components = count_components(fine, x, cut);
  }
  if (reinit) x = reinitialize(fine, x, config_.reinit).phi;
  x = apply_non_design(fine, x, config_.boundary, config_.non_design_width);
  // The strips may leave a loaded island behind; such a design carries no load.
  if (config_.filter != FilterMode::none && filter(x, extract_geometry(fine, x)).removed > 0)
    throw DegenerateDomain("material around the load is detached from the supports");
  return x;
}

FilterResult Optimizer::filter(const LevelSetField& phi, const CutGeometry& cut) const {
  if (config_.filter == FilterMode::stiffness)
    return filter_unsupported(mesh_, phi, cut, config_.boundary);
  return filter_disconnected(mesh_.fine, phi, cut, config_.boundary);
}

Evaluation Optimizer::evaluate(const LevelSetField& phi) const {
  Evaluation ev;
  ev.phi = phi;
  ev.cut = extract_geometry(mesh_.fine, phi);
  ev.classification = classify(mesh_, phi, ev.cut, config_.boundary);
  ev.components = count_components(mesh_.fine, phi, ev.cut);
  ev.space = std::make_shared<FESpace>(mesh_, ev.classification);
  const auto system = assemble_system(*ev.space, config_.material, ev.cut,
                                      ev.classification, config_.boundary,
                                      config_.stabilization);
  ev.u = solve(system, config_.solver_tolerance);
  ev.value = objective(*ev.space, ev.u, ev.cut, config_.material, config_.kappa);
  return ev;
}

NodalVectorField Optimizer::shape_derivative(const Evaluation& state) const {
  return cutshape::shape_derivative(*state.space, state.u, config_.material,
                                    config_.kappa, state.cut);
}

OptimizationState Optimizer::run(const OptimizationCallbacks& cb,
                                 Evaluation* final_state) const {
  OptimizationState state;
  state.T = config_.T0;
  Evaluation current = evaluate(initial_levelset());

  auto record = [&](double T, const Evaluation& ev, bool accepted, int components) {
    IterationRecord r{state.iteration, state.t, T, ev.value.J, ev.value.compliance,
                      ev.value.volume, accepted, components};
    state.history.push_back(r);
    if (cb.on_record) cb.on_record(r);
    return r;
  };
  {
    const auto r = record(state.T, current, true, current.components);
    if (cb.on_accept) cb.on_accept(r, current);
  }

  const double T_min = 1e-6 * config_.T0;
  while (state.iteration < config_.max_iterations) {
    const Velocity v = velocity_.solve(shape_derivative(current));
    if (v.stationary) {
      state.reason = StopReason::stationary;
      break;
    }
    ++state.iteration;
    bool accepted = false;
    while (!accepted) {
      const LevelSetField moved =
          transport_.advance(current.phi, v.beta, state.T, config_.transport_substeps);
      int components = 0;
      std::optional<Evaluation> trial;
      try {
        trial = evaluate(postprocess(moved, &components, false));
      } catch (const DegenerateDomain&) {
        // Unsolvable trial geometry: treated like an infinite objective.
      } catch (const SolverError&) {
      }
      if (trial && trial->value.J < current.value.J) {
        // Reinitialization moves the zero level set slightly; keep it only
        // when the decrease survives.
        try {
          Evaluation reinit = evaluate(postprocess(trial->phi, nullptr, true));
          if (reinit.value.J < current.value.J) trial = std::move(reinit);
        } catch (const DegenerateDomain&) {
        } catch (const SolverError&) {
        }
        state.t += state.T;
        const auto r = record(state.T, *trial, true, components);
        current = std::move(*trial);
        if (cb.on_accept) cb.on_accept(r, current);
        state.T *= 2.0;
        accepted = true;
      } else {
        if (trial) {
          record(state.T, *trial, false, components);
        } else {
          IterationRecord r{state.iteration, state.t, state.T,
                            std::numeric_limits<double>::infinity(), 0.0, 0.0, false, 0};
          state.history.push_back(r);
          if (cb.on_record) cb.on_record(r);
        }
        state.T *= 0.5;
        if (state.T < T_min) break;
      }
    }
    if (!accepted) {
      --state.iteration;
      state.reason = StopReason::step_underflow;
      break;
    }
  }
  if (final_state) *final_state = std::move(current);
  return state;
}

}  // namespace cutshape
