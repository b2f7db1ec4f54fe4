#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "fdkp/grid.hpp"
#include "fdkp/solver_config.hpp"
#include "fdkp/symbol_params.hpp"

namespace fdkp::io {

/// Flat runtime configuration: every key is a scalar or a flat array, with
/// defaults matching the library's documented choices. Unknown keys are an
/// error (typo safety); invalid values are rejected with the first violated
/// constraint named.
struct Config {
  SymbolParams params;
  solver::SolverConfig solver;

  double grid_half_width_x = 100.0;
  double grid_half_width_y = 100.0;
  int grid_points_x = 256;
  int grid_points_y = 256;

  std::vector<double> epsilons{0.2, 0.1, 0.05, 0.025};
  int k_index = 1;
  std::string out_dir = "out";
  std::string report_path;  // input of the `estimates` command

  // Probe levels refine dx at a half-width where the eigenvalue is
  // box-insensitive; dx = 0.78 grids are not resolution-converged.
  std::vector<int> probe_grid_points{256, 512};
  double probe_half_width = 50.0;
  double dispersion_k1_max = 10.0;
  int dispersion_samples = 1000;

  spectral::Grid grid() const;
  void validate() const;

  /// Canonical flat-JSON dump (sorted keys); the reproducibility record.
  std::string to_json() const;
  /// FNV-1a hash of the canonical dump; changes when any key changes.
  std::uint64_t hash() const;
};

/// Defaults overlaid with the flat JSON object at `path`.
Config load_config(const std::string& path);

/// Same, from already-read text (used by tests and --config -).
Config parse_config(const std::string& text);

}  // namespace fdkp::io
