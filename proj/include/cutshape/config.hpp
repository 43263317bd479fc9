#pragma once

#include <string>

#include "cutshape/shapeopt.hpp"

namespace cutshape {

/// A run: the optimization problem plus output settings. Read from JSON; see
/// README.md for the schema.
struct RunConfig {
  std::string problem = "cantilever";  // cantilever | lshape | custom
  OptimizationConfig optimization;
  int snapshot_every = 10;             // 0 disables snapshots
  std::string output_dir = "output";
};

/// Preset problems with default parameters for the given discretization.
RunConfig cantilever_preset(ElementKind kind = ElementKind::quadrilateral, int k = 1,
                            double h = 0.05);
RunConfig lshape_preset(ElementKind kind = ElementKind::triangle, int k = 2,
                        double h = 0.05);

/// Parse a JSON document. Throws InvalidInput naming the offending field.
RunConfig parse_config(const std::string& text);
RunConfig load_config(const std::string& path);

/// Checks mesh compatibility and parameter ranges; throws InvalidInput.
void validate(const RunConfig& config);

/// Resolved configuration, including defaulted parameters, as JSON text.
std::string describe(const RunConfig& config);

}  // namespace cutshape
