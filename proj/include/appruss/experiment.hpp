#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "appruss/geometry.hpp"
#include "appruss/kinematics.hpp"
#include "appruss/perception.hpp"
#include "appruss/planner.hpp"
#include "appruss/sim.hpp"

namespace appruss {

/// Benchmark scenario. Geometry (source, target, obstacles, markers,
/// planner workspace) is stored in grid units and scaled by unit_scale to
/// meters when a scene is built; planner/execution/noise parameters are
/// already in meters and seconds.
struct Scenario {
  std::string name;
  double unit_scale = 0.4;  ///< meters per grid unit
  Vec3 source;
  Vec3 target;
  std::vector<Marker> markers;
  int desired_marker_id = -1;
  std::vector<Cuboid> obstacles;
  std::uint64_t seed = 0;
  int repetitions = 10;
  PlannerConfig planner;
  ExecutionConfig execution;
  NoiseModel noise;
  double standoff = 0.02;  ///< meters along the marker normal
  std::string arm_preset = "ur5e";
  Pose arm_base;
};

enum class Condition { WithPlanning, WithoutPlanning };

const char* to_string(Condition condition);

struct MetricsRow {
  std::string scenario_name;
  Condition condition = Condition::WithPlanning;
  double success_rate = 0.0;      ///< percent, 100 * n_success / n_total
  double mean_moving_time = 0.0;  ///< seconds, over successful runs; valid iff n_success > 0
  int n_success = 0;
  int n_total = 0;
};

/// Scenario geometry scaled to meters, with the arm model instantiated.
struct Scene {
  Vec3 source;
  Vec3 target;
  std::vector<Cuboid> obstacles;
  std::vector<Marker> markers;
  PlannerConfig planner;
  ArmModel arm;
};

Scene build_scene(const Scenario& scenario);

/// Load one scenario from a JSON file. Missing optional fields get defaults.
/// Throws ParseError on malformed input, ValidationError (naming the field)
/// on invariant violations. The APPRUSS_SEED environment variable, when set,
/// overrides the scenario seed.
Scenario load_scenario(const std::string& path);

/// Load a benchmark suite: a suite manifest ({"scenarios": [paths...]}), a
/// single scenario file, or a directory of scenario files (sorted by name).
std::vector<Scenario> load_suite(const std::string& path);

/// One repetition of one condition. Repetition streams are derived from
/// (scenario seed, condition, repetition index), so conditions and
/// repetitions are statistically independent and individually reproducible.
RunResult run_repetition(const Scenario& scenario, Condition condition, int repetition);

/// Full protocol: every scenario, both conditions, `repetitions` runs each.
/// Appends per-condition AGGREGATE rows when more than one scenario is given.
/// Planning or perception failures mark the repetition failed, never abort.
std::vector<MetricsRow> run_benchmark(const std::vector<Scenario>& scenarios);

enum class OutputFormat { Csv, Table };

/// CSV (header `scenario,condition,success_rate_pct,mean_moving_time_s,
/// n_success,n_total`) or an aligned two-condition table. Deterministic,
/// byte-stable output.
std::string emit_results(const std::vector<MetricsRow>& rows, OutputFormat format);

/// Inverse of emit_results(Csv), used for round-trip checks.
std::vector<MetricsRow> parse_results_csv(const std::string& text);

}  // namespace appruss
