#include <cstdint>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <string>

#include "CLI11.hpp"
#include "appruss/errors.hpp"
#include "appruss/experiment.hpp"

namespace {

using namespace appruss;

void write_output(const std::string& text, const std::string& out_path) {
  if (out_path.empty()) {
    std::cout << text;
    return;
  }
  std::ofstream out(out_path, std::ios::binary);
  if (!out) throw ParseError("cannot open output file: " + out_path);
  out << text;
}

int cmd_plan(const std::string& scenario_path, const std::string& out_path) {
  const Scenario scenario = load_scenario(scenario_path);
  const Scene scene = build_scene(scenario);
  Vec3 goal = scene.target;
  for (const Marker& marker : scene.markers) {
    if (marker.id == scenario.desired_marker_id) {
      goal = approach_point(marker.true_pose, scenario.standoff);
    }
  }
  PlanResult plan;
  try {
    plan = plan_path(scene.source, goal, scene.obstacles, scene.planner);
  } catch (const Error& e) {
    std::cerr << "planning failed: " << e.what() << "\n";
    return 2;
  }
  std::string csv = "x,y,z\n";
  for (const Vec3& p : bezier_sample_uniform(plan.curve, scenario.execution.n_waypoints)) {
    char buf[96];
    std::snprintf(buf, sizeof(buf), "%.9f,%.9f,%.9f\n", p.x, p.y, p.z);
    csv += buf;
  }
  write_output(csv, out_path);
  std::cerr << "planned in " << plan.iterations_used << " iterations, min clearance "
            << plan.min_clearance_achieved << " m\n";
  return 0;
}

int cmd_run(const std::string& scenario_path, const std::string& condition_name,
            std::uint64_t seed, bool seed_given) {
  Scenario scenario = load_scenario(scenario_path);
  if (seed_given) scenario.seed = seed;
  const Condition condition =
      condition_name == "with" ? Condition::WithPlanning : Condition::WithoutPlanning;
  const RunResult result = run_repetition(scenario, condition, 0);
  char buf[128];
  std::snprintf(buf, sizeof(buf), "success=%s moving_time=%.6f failure_reason=%s\n",
                result.success ? "true" : "false", result.moving_time,
                to_string(result.failure_reason));
  std::cout << buf;
  return 0;
}

int cmd_bench(const std::string& suite_path, const std::string& format,
              const std::string& out_path, int reps_override) {
  std::vector<Scenario> scenarios = load_suite(suite_path);
  if (reps_override > 0) {
    for (auto& s : scenarios) s.repetitions = reps_override;
  }
  const auto rows = run_benchmark(scenarios);
  const OutputFormat fmt = format == "table" ? OutputFormat::Table : OutputFormat::Csv;
  write_output(emit_results(rows, fmt), out_path);
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Obstacle-aware Bezier path planning benchmark for a simulated ultrasound arm"};
  app.require_subcommand(1);

  std::string scenario_path, out_path, condition = "with", format = "csv", suite_path;
  std::uint64_t seed = 0;
  int reps_override = 0;

  auto* plan = app.add_subcommand("plan", "Plan a path and emit the sampled curve as CSV");
  plan->add_option("--scenario", scenario_path, "scenario JSON file")->required();
  plan->add_option("--out", out_path, "output file (default: stdout)");

  auto* run = app.add_subcommand("run", "Execute a single repetition and print the outcome");
  run->add_option("--scenario", scenario_path, "scenario JSON file")->required();
  run->add_option("--condition", condition, "with|without")
      ->check(CLI::IsMember({"with", "without"}));
  auto* seed_opt = run->add_option("--seed", seed, "override the scenario seed");

  auto* bench = app.add_subcommand("bench", "Run the full benchmark protocol");
  bench->add_option("--suite", suite_path, "suite manifest, scenario file, or directory")
      ->required();
  bench->add_option("--format", format, "csv|table")->check(CLI::IsMember({"csv", "table"}));
  bench->add_option("--out", out_path, "output file (default: stdout)");
  bench->add_option("--reps", reps_override, "override repetitions for every scenario")
      ->check(CLI::PositiveNumber);

  CLI11_PARSE(app, argc, argv);

  try {
    if (plan->parsed()) return cmd_plan(scenario_path, out_path);
    if (run->parsed()) return cmd_run(scenario_path, condition, seed, seed_opt->count() > 0);
    if (bench->parsed()) return cmd_bench(suite_path, format, out_path, reps_override);
  } catch (const appruss::Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
