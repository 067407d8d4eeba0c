// SPDX-License-Identifier: Apache-2.0
#include "fda/scenario.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include <json.hpp>

namespace fda {

using nlohmann::json;

namespace {

[[noreturn]] void fail(const std::string& path, const std::string& what) {
  throw ConfigError(path + ": " + what);
}

const json& require(const json& obj, const std::string& key, const std::string& path) {
  if (!obj.is_object()) fail(path, "expected an object");
  auto it = obj.find(key);
  if (it == obj.end()) fail(path.empty() ? key : path + "." + key, "missing field");
  return *it;
}

double number(const json& v, const std::string& path) {
  if (!v.is_number()) fail(path, "expected a number");
  return v.get<double>();
}

long long integer(const json& v, const std::string& path) {
  if (!v.is_number_integer()) fail(path, "expected an integer");
  return v.get<long long>();
}

std::pair<double, double> pair_of(const json& v, const std::string& path) {
  if (!v.is_array() || v.size() != 2) fail(path, "expected [lo, hi]");
  return {number(v[0], path + "[0]"), number(v[1], path + "[1]")};
}

template <typename T, typename Read>
void optional_field(const json& obj, const std::string& key, const std::string& path, T& out,
                    Read read) {
  auto it = obj.find(key);
  if (it != obj.end()) out = static_cast<T>(read(*it, path + "." + key));
}

ArrayConfig parse_array(const json& a) {
  if (!a.is_object()) fail("array", "expected an object");
  ArrayConfig cfg;
  const auto whole_number = [](const json& v, const std::string& p) {
    const long long n = integer(v, p);
    if (n < 1 || n > 4096) fail(p, "must be a positive integer");
    return static_cast<int>(n);
  };
  cfg.num_tx = whole_number(require(a, "num_tx", "array"), "array.num_tx");
  cfg.num_rx = whole_number(require(a, "num_rx", "array"), "array.num_rx");
  cfg.spacing_m = number(require(a, "spacing_m", "array"), "array.spacing_m");
  cfg.carrier_hz = number(require(a, "carrier_hz", "array"), "array.carrier_hz");
  cfg.offset_hz = number(require(a, "offset_hz", "array"), "array.offset_hz");
  cfg.pulse_s = number(require(a, "pulse_s", "array"), "array.pulse_s");
  optional_field(a, "lightspeed", "array", cfg.lightspeed, number);
  try {
    cfg.validate();
  } catch (const std::invalid_argument& e) {
    throw ConfigError(e.what());
  }
  return cfg;
}

void write_text(const std::filesystem::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  out << text;
  if (!out) throw std::runtime_error("write failed: " + path.string());
}

// Locale-independent, round-trippable enough for plotting and byte-stable.
std::string fmt(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.10g", v == 0.0 ? 0.0 : v);
  return buf;
}

json complex_pairs(const ComplexVector& v) {
  json out = json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) out.push_back({v(i).real(), v(i).imag()});
  return out;
}

json constraint_block(const ConstraintSet& cs, const ComplexVector& w) {
  json energy = json::array();
  for (Eigen::Index m = 0; m < w.size(); ++m) energy.push_back(std::norm(w(m)));
  const std::vector<double> slack = cs.slacks(w);
  return {{"similarity_value", cs.similarity_value(w)},
          {"similarity_cap", cs.similarity_cap},
          {"energy_values", energy},
          {"energy_cap", cs.energy_cap},
          {"slacks", slack},
          {"min_slack", *std::min_element(slack.begin(), slack.end())}};
}

json pair_block(const ConstraintSet& cs, const WeightPair& p, double value) {
  return {{"rpde", value},
          {"w", complex_pairs(p.w)},
          {"b", complex_pairs(p.b)},
          {"constraints", constraint_block(cs, p.w)}};
}

// Profile through each target: cut along one axis at the target's cell on
// the other axis, every column normalized to its own maximum.
std::string profile_csv(const RunResult& r, const std::vector<Target>& targets, bool along_range,
                        std::size_t num_angles, std::size_t num_ranges) {
  std::ostringstream out;
  out << (along_range ? "range_km" : "angle_deg");
  for (std::size_t t = 0; t < targets.size(); ++t) out << ",target" << (t + 1) << "_db";
  out << '\n';

  const std::size_t len = along_range ? num_ranges : num_angles;
  std::vector<std::vector<double>> cols;
  for (const Target& tgt : targets) {
    const std::size_t cell = nearest_cell(r.whole, tgt);
    const std::size_t a = cell / num_ranges;
    const std::size_t g = cell % num_ranges;
    std::vector<double> col(len);
    for (std::size_t i = 0; i < len; ++i)
      col[i] = r.energy[along_range ? a * num_ranges + i : i * num_ranges + g].power;
    const double peak = *std::max_element(col.begin(), col.end());
    for (double& v : col) v = to_db(v, peak);
    cols.push_back(std::move(col));
  }
  for (std::size_t i = 0; i < len; ++i) {
    const GridPoint& pt = r.whole.points[along_range ? i : i * num_ranges];
    out << fmt(along_range ? pt.range_m / 1e3 : rad_to_deg(pt.angle_rad));
    for (const auto& col : cols) out << ',' << fmt(col[i]);
    out << '\n';
  }
  return out.str();
}

}  // namespace

void Scenario::validate() const {
  try {
    array.validate();
  } catch (const std::invalid_argument& e) {
    throw ConfigError(e.what());
  }
  if (desired_angles.empty()) fail("region.desired_angles_deg", "must not be empty");
  if (!(range_interval.lo_m > 0.0 && range_interval.lo_m < range_interval.hi_m))
    fail("region.range_km", "must satisfy 0 < lo < hi");
  if (targets.empty()) fail("targets", "at least one target is required");
  for (std::size_t i = 0; i < targets.size(); ++i) {
    const Target& t = targets[i];
    const std::string p = "targets[" + std::to_string(i) + "]";
    if (!(t.angle_deg >= -90.0 && t.angle_deg <= 90.0)) fail(p + ".angle_deg", "outside [-90, 90]");
    if (!(t.range_m >= range_interval.lo_m && t.range_m <= range_interval.hi_m))
      fail(p + ".range_km", "outside the observed range interval");
  }
  if (!(angle_step_deg > 0.0 && angle_step_deg <= 180.0))
    fail("grid.angle_step_deg", "must be in (0, 180]");
  if (!(range_step_m > 0.0 && range_step_m <= range_interval.length()))
    fail("grid.range_step_km", "must be positive and no larger than the range interval");
  if (algorithm.iterations < 1) fail("algorithm.iterations", "must be >= 1");
  if (algorithm.trials < 1) fail("algorithm.trials", "must be >= 1");
  if (!(algorithm.sdp_tol > 0.0 && algorithm.sdp_tol < 1.0))
    fail("algorithm.sdp_tol", "must be in (0, 1)");
}

void Scenario::use_fast_grid() {
  angle_step_deg = 1.0;
  range_step_m = 500.0;
}

DesignProblem Scenario::design_problem() const {
  DesignProblem p;
  p.config = array;
  p.desired_angles = desired_angles;
  p.whole = discretize(AngleSet::full(), range_interval, angle_step_deg, range_step_m);
  p.desired = target_cells(p.whole, targets);
  p.quadrature_step_deg = angle_step_deg;
  return p;
}

Scenario parse_scenario(const std::string& json_text) {
  json root;
  try {
    root = json::parse(json_text);
  } catch (const json::parse_error& e) {
    throw ConfigError(std::string("parse error: ") + e.what());
  }
  if (!root.is_object()) fail("<root>", "expected an object");

  Scenario sc;
  if (auto it = root.find("name"); it != root.end()) {
    if (!it->is_string()) fail("name", "expected a string");
    sc.name = it->get<std::string>();
  }
  sc.array = parse_array(require(root, "array", ""));

  const json& region = require(root, "region", "");
  const json& angles = require(region, "desired_angles_deg", "region");
  if (!angles.is_array() || angles.empty())
    fail("region.desired_angles_deg", "expected a non-empty list of [lo, hi]");
  std::vector<std::pair<double, double>> intervals;
  for (std::size_t i = 0; i < angles.size(); ++i)
    intervals.push_back(pair_of(angles[i], "region.desired_angles_deg[" + std::to_string(i) + "]"));
  try {
    sc.desired_angles = AngleSet(intervals);
  } catch (const std::invalid_argument& e) {
    fail("region.desired_angles_deg", e.what());
  }
  const auto [lo_km, hi_km] = pair_of(require(region, "range_km", "region"), "region.range_km");
  if (!(lo_km > 0.0 && lo_km < hi_km)) fail("region.range_km", "must satisfy 0 < lo < hi");
  sc.range_interval = RangeInterval(lo_km * 1e3, hi_km * 1e3);

  const json& targets = require(root, "targets", "");
  if (!targets.is_array()) fail("targets", "expected a list");
  for (std::size_t i = 0; i < targets.size(); ++i) {
    const std::string p = "targets[" + std::to_string(i) + "]";
    const double deg = number(require(targets[i], "angle_deg", p), p + ".angle_deg");
    const double km = number(require(targets[i], "range_km", p), p + ".range_km");
    sc.targets.push_back({deg, km * 1e3});
  }

  const json& grid = require(root, "grid", "");
  sc.angle_step_deg = number(require(grid, "angle_step_deg", "grid"), "grid.angle_step_deg");
  sc.range_step_m = 1e3 * number(require(grid, "range_step_km", "grid"), "grid.range_step_km");

  if (auto it = root.find("algorithm"); it != root.end()) {
    const json& alg = *it;
    if (!alg.is_object()) fail("algorithm", "expected an object");
    optional_field(alg, "iterations", "algorithm", sc.algorithm.iterations, integer);
    optional_field(alg, "trials", "algorithm", sc.algorithm.trials, integer);
    if (auto s = alg.find("seed"); s != alg.end()) {
      if (!s->is_number_unsigned() && !(s->is_number_integer() && s->get<long long>() >= 0))
        fail("algorithm.seed", "expected a non-negative integer");
      sc.algorithm.seed = s->get<std::uint64_t>();
    }
    optional_field(alg, "sdp_tol", "algorithm", sc.algorithm.sdp_tol, number);
  }
  sc.validate();
  return sc;
}

Scenario load_scenario(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError(path.string() + ": cannot open file");
  std::ostringstream buf;
  buf << in.rdbuf();
  Scenario sc = parse_scenario(buf.str());
  if (sc.name.empty()) sc.name = path.stem().string();
  return sc;
}

std::vector<std::size_t> local_maxima(const std::vector<EnergyCell>& cells, std::size_t num_angles,
                                      std::size_t num_ranges) {
  if (cells.size() != num_angles * num_ranges)
    throw std::invalid_argument("local_maxima: grid shape does not match cell count");
  std::vector<std::size_t> out;
  const long na = static_cast<long>(num_angles);
  const long nr = static_cast<long>(num_ranges);
  for (long a = 0; a < na; ++a) {
    for (long g = 0; g < nr; ++g) {
      const double p = cells[static_cast<std::size_t>(a * nr + g)].power;
      bool peak = true;
      for (long da = -1; da <= 1 && peak; ++da) {
        for (long dg = -1; dg <= 1; ++dg) {
          const long aa = a + da, gg = g + dg;
          if ((da == 0 && dg == 0) || aa < 0 || aa >= na || gg < 0 || gg >= nr) continue;
          if (cells[static_cast<std::size_t>(aa * nr + gg)].power > p) {
            peak = false;
            break;
          }
        }
      }
      if (peak) out.push_back(static_cast<std::size_t>(a * nr + g));
    }
  }
  std::stable_sort(out.begin(), out.end(), [&](std::size_t x, std::size_t y) {
    return cells[x].power > cells[y].power;
  });
  return out;
}

RunResult run_scenario(const Scenario& scenario, const std::filesystem::path& out_dir) {
  scenario.validate();
  const DesignProblem problem = scenario.design_problem();
  const std::size_t num_angles = cell_centers(-90.0, 90.0, scenario.angle_step_deg).size();
  const std::size_t num_ranges =
      cell_centers(scenario.range_interval.lo_m, scenario.range_interval.hi_m, scenario.range_step_m)
          .size();

  RunResult r;
  r.whole = problem.whole;
  r.desired = problem.desired;
  OptimizeOptions opts;
  opts.iterations = scenario.algorithm.iterations;
  opts.trials = scenario.algorithm.trials;
  opts.seed = scenario.algorithm.seed;
  opts.rank_one_tol = scenario.algorithm.sdp_tol;

  const auto t0 = std::chrono::steady_clock::now();
  r.report = optimize(problem, opts);
  r.wall_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();

  const OptimizationReport& rep = r.report;
  const WeightPair& shown = rep.best;
  r.energy = energy_grid(shown.w, shown.b, r.whole, scenario.array);
  r.peaks = local_maxima(r.energy, num_angles, num_ranges);

  std::filesystem::create_directories(out_dir);

  {
    const auto ref = beampattern_curve(rep.reference.initial, scenario.array, scenario.angle_step_deg);
    const auto opt = beampattern_curve(shown.w, scenario.array, scenario.angle_step_deg);
    std::ostringstream out;
    out << "theta_deg,reference_db,optimized_db\n";
    for (std::size_t i = 0; i < ref.size(); ++i)
      out << fmt(ref[i].theta_deg) << ',' << fmt(ref[i].power_db) << ',' << fmt(opt[i].power_db)
          << '\n';
    write_text(out_dir / "beampattern.csv", out.str());
  }
  {
    std::ostringstream out;
    out << "range_km,angle_deg,power_db\n";
    for (const EnergyCell& c : r.energy)
      out << fmt(c.range_m / 1e3) << ',' << fmt(rad_to_deg(c.angle_rad)) << ',' << fmt(c.power_db)
          << '\n';
    write_text(out_dir / "energy_grid.csv", out.str());
  }
  write_text(out_dir / "range_profile.csv",
             profile_csv(r, scenario.targets, true, num_angles, num_ranges));
  write_text(out_dir / "angle_profile.csv",
             profile_csv(r, scenario.targets, false, num_angles, num_ranges));
  {
    std::ostringstream out;
    out << "iteration,rpde\n";
    for (std::size_t k = 0; k < rep.rpde_trace.size(); ++k)
      out << (k + 1) << ',' << fmt(rep.rpde_trace[k]) << '\n';
    write_text(out_dir / "convergence.csv", out.str());
  }

  json sdp_stats = json::array();
  for (const IterationStats& s : rep.transmit_stats) {
    sdp_stats.push_back({{"iteration", s.iteration},
                         {"status", sdp::to_string(s.status)},
                         {"sdr_bound", s.sdr_bound},
                         {"duality_gap", s.duality_gap},
                         {"rank_one", s.rank_one},
                         {"trials", s.trials},
                         {"feasible_candidates", s.feasible},
                         {"selected_ratio", s.selected_ratio},
                         {"max_candidate_ratio", s.max_candidate_ratio}});
  }
  json targets = json::array();
  for (const Target& t : scenario.targets) {
    const std::size_t cell = nearest_cell(r.whole, t);
    targets.push_back({{"angle_deg", t.angle_deg},
                       {"range_km", t.range_m / 1e3},
                       {"cell_angle_deg", rad_to_deg(r.whole.points[cell].angle_rad)},
                       {"cell_range_km", r.whole.points[cell].range_m / 1e3},
                       {"power_db", r.energy[cell].power_db}});
  }
  json peaks = json::array();
  for (std::size_t k = 0; k < std::min<std::size_t>(5, r.peaks.size()); ++k) {
    const EnergyCell& c = r.energy[r.peaks[k]];
    peaks.push_back({{"angle_deg", rad_to_deg(c.angle_rad)},
                     {"range_km", c.range_m / 1e3},
                     {"power_db", c.power_db}});
  }

  const json report = {
      {"scenario", scenario.name},
      {"seed", scenario.algorithm.seed},
      {"iterations", rep.iterations_run},
      {"trials", scenario.algorithm.trials},
      {"grid",
       {{"angle_step_deg", scenario.angle_step_deg},
        {"range_step_km", scenario.range_step_m / 1e3},
        {"whole_points", r.whole.size()},
        {"desired_points", r.desired.size()}}},
      {"wall_time_s", r.wall_seconds},
      {"rpde",
       {{"initial", rep.rpde_trace.front()},
        {"final", rep.final_rpde},
        {"best", rep.best_rpde},
        {"algorithm_output", rep.algorithm_output_rpde}}},
      {"reference",
       {{"w0", complex_pairs(rep.reference.unit)},
        {"initial", complex_pairs(rep.reference.initial)},
        {"mainlobe_ratio", rep.reference.mainlobe_ratio}}},
      {"final", pair_block(rep.constraints, rep.final, rep.final_rpde)},
      {"best", pair_block(rep.constraints, rep.best, rep.best_rpde)},
      {"algorithm_output",
       pair_block(rep.constraints, rep.algorithm_output, rep.algorithm_output_rpde)},
      {"energy_grid_pair", "best"},
      {"targets", targets},
      {"peaks", peaks},
      {"sdp", sdp_stats}};
  write_text(out_dir / "report.json", report.dump(2) + "\n");
  return r;
}

}  // namespace fda
