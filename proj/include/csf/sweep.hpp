#pragma once

// Grid sweeps over scenario parameters. Each cell runs one scenario in its
// own subdirectory; a manifest aggregates the cell statuses.

#include <string>
#include <vector>

#include <json.hpp>

#include "csf/scenarios.hpp"

namespace csf {

struct SweepGrid {
  // Empty lists keep the base value. Cells are the Cartesian product in the
  // order L, B, alpha, N, h (h varies fastest).
  std::vector<double> L;
  std::vector<double> B;      // replaces B_n of the base ladder (n = ladder.n)
  std::vector<double> alpha;  // one start time per cell
  std::vector<std::size_t> N;
  std::vector<double> h;
};

struct SweepConfig {
  ScenarioConfig base;
  SweepGrid grid;
  std::string output_dir = "sweep";
  unsigned threads = 0;  // 0: hardware concurrency

  void validate() const;
};

SweepConfig sweep_config_from_json(const nlohmann::json& j);

struct SweepCell {
  std::string dir;  // relative to the sweep output directory
  nlohmann::json params;
  ScenarioConfig config;
};

/// Expands the grid into cells with fixed numbering.
std::vector<SweepCell> sweep_cells(const SweepConfig& cfg);

struct SweepResult {
  nlohmann::json manifest;  // without run_info
  std::size_t passed = 0;
  std::size_t failed = 0;      // FAIL or error
  std::size_t unresolved = 0;
};

/// Runs every cell (concurrently), writes cell_XXX/report.json and
/// manifest.json. Cell errors are recorded, not thrown.
SweepResult run_sweep(const SweepConfig& cfg);

}  // namespace csf
