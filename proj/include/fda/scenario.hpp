// SPDX-License-Identifier: Apache-2.0
//
// Scenario files and the batch runner that turns one scenario into the
// CSV / JSON output set.
#pragma once

#include <cstdint>
#include <filesystem>
#include <stdexcept>
#include <string>
#include <vector>

#include "fda/beam_optimizer.hpp"

namespace fda {

/// Bad or missing configuration. The message starts with the field path.
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct AlgorithmSettings {
  int iterations = 20;
  int trials = 200;
  std::uint64_t seed = 0;
  double sdp_tol = 1e-6;
};

struct Scenario {
  std::string name;
  ArrayConfig array;
  AngleSet desired_angles;
  RangeInterval range_interval;
  std::vector<Target> targets;  // degrees and meters
  double angle_step_deg = 0.2;
  double range_step_m = 100.0;
  AlgorithmSettings algorithm;

  void validate() const;
  /// Coarse 1 degree / 0.5 km grid.
  void use_fast_grid();
  DesignProblem design_problem() const;
};

Scenario parse_scenario(const std::string& json_text);
Scenario load_scenario(const std::filesystem::path& path);

struct RunResult {
  OptimizationReport report;
  Grid whole;
  Grid desired;
  std::vector<EnergyCell> energy;
  std::vector<std::size_t> peaks;  // local maxima of energy, strongest first
  double wall_seconds = 0.0;
};

/// Optimizes and writes beampattern.csv, energy_grid.csv, range_profile.csv,
/// angle_profile.csv, convergence.csv and report.json into out_dir.
RunResult run_scenario(const Scenario& scenario, const std::filesystem::path& out_dir);

/// Indices of cells of an angle-major rectangular grid that are not
/// exceeded by any of their 8 neighbours, sorted by decreasing power.
std::vector<std::size_t> local_maxima(const std::vector<EnergyCell>& cells, std::size_t num_angles,
                                      std::size_t num_ranges);

}  // namespace fda
