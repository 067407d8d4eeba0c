// SPDX-License-Identifier: Apache-2.0
#include <cstdint>
#include <cstdio>
#include <exception>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "fda/scenario.hpp"

int main(int argc, char** argv) {
  CLI::App app{"Transmit/receive weight design for coherent FDA radar"};
  std::string config;
  std::string out_dir = "out";
  std::optional<std::uint64_t> seed;
  std::optional<int> iterations;
  std::optional<int> trials;
  bool fast = false;
  app.add_option("--config", config, "scenario file (JSON)")->required();
  app.add_option("--out", out_dir, "output directory");
  app.add_option("--seed", seed, "random seed for randomization rounding");
  app.add_option("--iterations", iterations, "number of alternating iterations");
  app.add_option("--trials", trials, "randomization trials per transmit update");
  app.add_flag("--fast", fast, "coarse 1 deg / 0.5 km grids");
  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : 1;
  }

  fda::Scenario sc;
  try {
    sc = fda::load_scenario(config);
    if (seed) sc.algorithm.seed = *seed;
    if (iterations) sc.algorithm.iterations = *iterations;
    if (trials) sc.algorithm.trials = *trials;
    if (fast) sc.use_fast_grid();
    sc.validate();
  } catch (const std::exception& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return 1;
  }

  try {
    const fda::RunResult r = fda::run_scenario(sc, out_dir);
    std::printf("%s: %zu grid points, rpde final %.6f best %.6f, %.2f s\n", sc.name.c_str(),
                r.whole.size(), r.report.final_rpde, r.report.best_rpde, r.wall_seconds);
  } catch (const std::exception& e) {
    std::cerr << "optimization error: " << e.what() << '\n';
    return 2;
  }
  return 0;
}
