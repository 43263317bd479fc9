// Command-line driver: `cutshape run <config>` and `cutshape validate <config>`.
#include <chrono>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>

#include <CLI11.hpp>
#include <json.hpp>

#include "cutshape/config.hpp"
#include "cutshape/io.hpp"
#include "cutshape/shapeopt.hpp"

namespace fs = std::filesystem;
using namespace cutshape;
using nlohmann::json;

namespace {

void write_json(const fs::path& path, const json& j) {
  std::ofstream out(path);
  out << j.dump(2) << '\n';
}

void write_snapshot(const fs::path& dir, int iter, const Optimizer& opt, const Evaluation& ev) {
  char name[32];
  std::snprintf(name, sizeof name, "iter_%04d", iter);
  const auto displacement = nodal_displacement(*ev.space, ev.u);
  const Vector vm = von_mises(*ev.space, ev.u, ev.cut, opt.config().material);
  write_levelset_vtk((dir / (std::string(name) + ".vtk")).string(), opt.mesh().fine, ev.phi,
                     &displacement, &vm);
  write_boundary_svg((dir / (std::string(name) + ".svg")).string(), opt.mesh().coarse, ev.cut);
}

int run(const std::string& path, std::optional<int> max_iter, std::optional<int> snapshot_every,
        std::optional<std::string> out_dir) {
  RunConfig config = load_config(path);
  if (max_iter) config.optimization.max_iterations = *max_iter;
  if (snapshot_every) config.snapshot_every = *snapshot_every;
  if (out_dir) config.output_dir = *out_dir;
  validate(config);

  const fs::path out = config.output_dir;
  fs::create_directories(out / "snapshots");
  {
    std::ofstream resolved(out / "config.resolved.json");
    resolved << describe(config) << '\n';
  }
  const auto start = std::chrono::steady_clock::now();
  auto elapsed = [&] {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  };

  IterationLog log((out / "iterations.csv").string());
  IterationRecord last{};
  double initial_J = 0.0;
  try {
    const Optimizer opt(config.optimization);
    OptimizationCallbacks cb;
    cb.on_record = [&](const IterationRecord& r) { log.append(r); };
    cb.on_accept = [&](const IterationRecord& r, const Evaluation& ev) {
      if (r.iter == 0) initial_J = r.J;
      last = r;
      std::fprintf(stderr, "iter %3d  J = %.6e  compliance = %.6e  volume = %.6f  T = %.3e\n",
                   r.iter, r.J, r.compliance, r.volume, r.T);
      if (config.snapshot_every > 0 && r.iter % config.snapshot_every == 0)
        write_snapshot(out / "snapshots", r.iter, opt, ev);
    };
    Evaluation final_state;
    const auto state = opt.run(cb, &final_state);
    write_snapshot(out / "snapshots", state.iteration, opt, final_state);
    write_json(out / "summary.json",
               {{"J", final_state.value.J},
                {"compliance", final_state.value.compliance},
                {"volume", final_state.value.volume},
                {"initial_J", initial_J},
                {"iterations", state.iteration},
                {"t", state.t},
                {"stop_reason", to_string(state.reason)},
                {"wall_time_s", elapsed()}});
    std::printf("J = %.10e  compliance = %.10e  volume = %.10e  (%d iterations, %s)\n",
                final_state.value.J, final_state.value.compliance, final_state.value.volume,
                state.iteration, to_string(state.reason));
  } catch (const std::exception& e) {
    write_json(out / "error.json", {{"error", e.what()},
                                    {"last_accepted_iteration", last.iter},
                                    {"last_J", last.J},
                                    {"wall_time_s", elapsed()}});
    throw;
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Level-set compliance optimization with a cut finite element method"};
  app.require_subcommand(1);

  std::string run_path, validate_path;
  std::optional<int> max_iter, snapshot_every;
  std::optional<std::string> out_dir;
  auto* run_cmd = app.add_subcommand("run", "run an optimization");
  run_cmd->add_option("config", run_path, "JSON configuration")->required();
  run_cmd->add_option("--max-iter", max_iter, "override max_iterations");
  run_cmd->add_option("--snapshot-every", snapshot_every, "override snapshot_every");
  run_cmd->add_option("--out-dir", out_dir, "override output_dir");
  auto* validate_cmd = app.add_subcommand("validate", "check a configuration");
  validate_cmd->add_option("config", validate_path, "JSON configuration")->required();

  CLI11_PARSE(app, argc, argv);
  try {
    if (*run_cmd) return run(run_path, max_iter, snapshot_every, out_dir);
    const RunConfig config = load_config(validate_path);
    validate(config);
    std::cout << describe(config) << '\n';
    return 0;
  } catch (const InvalidInput& e) {
    std::cerr << "invalid input: " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 3;
  }
}
