// SPDX-License-Identifier: Apache-2.0
#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include <json.hpp>

#include "fda/scenario.hpp"

using namespace fda;
namespace fs = std::filesystem;

namespace {

const fs::path kScenarios = fs::path(FDA_SOURCE_DIR) / "scenarios";

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

std::string error_of(const std::string& text) {
  try {
    parse_scenario(text);
  } catch (const ConfigError& e) {
    return e.what();
  }
  return {};
}

nlohmann::json base() { return nlohmann::json::parse(slurp(kScenarios / "single_target.json")); }

fs::path fresh_dir(const std::string& name) {
  const fs::path d = fs::temp_directory_path() / ("fda_test_" + name);
  fs::remove_all(d);
  return d;
}

}  // namespace

TEST_CASE("shipped single-target scenario") {
  const Scenario s = load_scenario(kScenarios / "single_target.json");
  CHECK(s.name == "single_target");
  REQUIRE(s.desired_angles.intervals().size() == 1);
  CHECK(s.desired_angles.intervals()[0] == std::pair{40.0, 60.0});
  REQUIRE(s.targets.size() == 1);
  CHECK(s.targets[0].angle_deg == 50.0);
  CHECK(s.targets[0].range_m == doctest::Approx(80e3));
  CHECK(s.angle_step_deg == 0.2);
  CHECK(s.range_step_m == doctest::Approx(100.0));
  CHECK(s.algorithm.iterations == 20);
  CHECK(s.algorithm.trials == 200);
  CHECK(s.algorithm.seed == 0);
  CHECK(s.array.num_tx == 10);
  CHECK(s.array.offset_hz == 5e3);
}

TEST_CASE("shipped multi-target scenarios") {
  const Scenario a = load_scenario(kScenarios / "multi_target_A.json");
  REQUIRE(a.desired_angles.intervals().size() == 2);
  CHECK(a.desired_angles.intervals()[0] == std::pair{-40.0, -10.0});
  CHECK(a.desired_angles.intervals()[1] == std::pair{10.0, 30.0});
  REQUIRE(a.targets.size() == 3);
  CHECK(a.targets[0].angle_deg == -15.0);
  CHECK(a.targets[0].range_m == doctest::Approx(68e3));
  CHECK(a.targets[1].range_m == doctest::Approx(64e3));
  CHECK(a.targets[2].range_m == doctest::Approx(75e3));
  const Scenario b = load_scenario(kScenarios / "multi_target_B.json");
  CHECK(b.desired_angles.intervals()[1] == std::pair{10.0, 50.0});
  CHECK(b.targets[0].angle_deg == -25.0);
}

TEST_CASE("defaults for the algorithm section") {
  auto j = base();
  j.erase("algorithm");
  const Scenario s = parse_scenario(j.dump());
  CHECK(s.algorithm.iterations == 20);
  CHECK(s.algorithm.trials == 200);
  CHECK(s.algorithm.seed == 0);
  CHECK(s.algorithm.sdp_tol == 1e-6);
}

TEST_CASE("configuration errors name the field") {
  auto j = base();
  j["array"].erase("num_tx");
  CHECK(error_of(j.dump()).find("array.num_tx") == 0);

  j = base();
  j["array"]["spacing_m"] = "wide";
  CHECK(error_of(j.dump()).find("array.spacing_m") == 0);

  j = base();
  j["targets"][0]["range_km"] = 90;
  CHECK(error_of(j.dump()).find("targets[0].range_km") == 0);

  j = base();
  j["region"]["desired_angles_deg"] = {{10, 30}, {20, 40}};
  CHECK(error_of(j.dump()).find("region.desired_angles_deg") == 0);

  j = base();
  j["grid"]["angle_step_deg"] = 0;
  CHECK(error_of(j.dump()).find("grid.angle_step_deg") == 0);

  j = base();
  j["algorithm"]["trials"] = 0;
  CHECK(error_of(j.dump()).find("algorithm.trials") == 0);

  j = base();
  j.erase("grid");
  CHECK(error_of(j.dump()).find("grid") == 0);

  CHECK(error_of("{ not json").find("parse error") == 0);
  CHECK_THROWS_AS(load_scenario(kScenarios / "does_not_exist.json"), ConfigError);
}

TEST_CASE("local maxima of a small surface") {
  std::vector<EnergyCell> cells;
  const double values[3][4] = {{1, 2, 1, 0}, {0, 1, 0, 5}, {3, 0, 0, 4}};
  for (auto& row : values)
    for (double v : row) cells.push_back({0.0, 0.0, v, 0.0});
  const auto peaks = local_maxima(cells, 3, 4);
  REQUIRE(peaks.size() == 3);
  CHECK(peaks[0] == 7);
  CHECK(peaks[1] == 8);
  CHECK(peaks[2] == 1);
  CHECK_THROWS_AS(local_maxima(cells, 2, 4), std::invalid_argument);
}

TEST_CASE("run writes the output set deterministically") {
  Scenario s = load_scenario(kScenarios / "single_target.json");
  s.use_fast_grid();
  s.algorithm.iterations = 4;
  const fs::path d1 = fresh_dir("run1"), d2 = fresh_dir("run2");
  const RunResult r = run_scenario(s, d1);
  run_scenario(s, d2);

  std::vector<std::string> names;
  for (const auto& e : fs::directory_iterator(d1)) names.push_back(e.path().filename().string());
  std::sort(names.begin(), names.end());
  CHECK(names == std::vector<std::string>{"angle_profile.csv", "beampattern.csv", "convergence.csv",
                                          "energy_grid.csv", "range_profile.csv", "report.json"});
  for (const char* f : {"angle_profile.csv", "beampattern.csv", "convergence.csv", "energy_grid.csv",
                        "range_profile.csv"})
    CHECK(slurp(d1 / f) == slurp(d2 / f));

  auto lines = [](const std::string& text) {
    std::vector<std::string> out;
    std::istringstream in(text);
    for (std::string l; std::getline(in, l);) out.push_back(l);
    return out;
  };
  const auto conv = lines(slurp(d1 / "convergence.csv"));
  CHECK(conv.size() == 1 + 4);
  CHECK(conv[0] == "iteration,rpde");

  const auto energy = lines(slurp(d1 / "energy_grid.csv"));
  CHECK(energy.size() == 1 + r.whole.size());
  CHECK(r.whole.size() == 180 * 50);
  double top = -1e9;
  for (std::size_t i = 1; i < energy.size(); ++i)
    top = std::max(top, std::stod(energy[i].substr(energy[i].rfind(',') + 1)));
  CHECK(top == 0.0);

  const auto beam = lines(slurp(d1 / "beampattern.csv"));
  CHECK(beam[0] == "theta_deg,reference_db,optimized_db");
  CHECK(beam.size() == 1 + 181);
  CHECK(lines(slurp(d1 / "range_profile.csv"))[0] == "range_km,target1_db");
  CHECK(lines(slurp(d1 / "angle_profile.csv")).size() == 1 + 180);

  const auto report = nlohmann::json::parse(slurp(d1 / "report.json"));
  CHECK(report["seed"] == 0);
  CHECK(report["final"]["w"].size() == 10);
  CHECK(report["final"]["b"].size() == 100);
  for (const char* k : {"final", "best", "algorithm_output"})
    for (double v : report[k]["constraints"]["slacks"]) CHECK(v >= -1e-6);
  CHECK(report["rpde"]["best"].get<double>() >= report["rpde"]["final"].get<double>());
  CHECK(report["wall_time_s"].get<double>() >= 0.0);
}
