#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <string>

#include "appruss/errors.hpp"
#include "appruss/experiment.hpp"
#include "doctest.h"

using namespace appruss;

namespace {

const std::string kScenarioDir = APPRUSS_SCENARIO_DIR;

std::string write_temp(const std::string& name, const std::string& content) {
  const std::string path = (std::filesystem::temp_directory_path() / name).string();
  std::ofstream out(path);
  out << content;
  return path;
}

Scenario quick_scenario() {
  Scenario sc;
  sc.name = "quick";
  sc.unit_scale = 0.4;
  sc.source = {1, 0, 0};
  sc.target = {0, 0, 1};
  sc.seed = 7;
  sc.repetitions = 3;
  sc.planner.clearance = 0.04;
  sc.planner.step = 0.02;
  sc.planner.max_iters = 150;
  sc.planner.workspace = Cuboid{{0.5, 0, 0.75}, {1.2, 1.0, 0.75}};
  sc.execution.collision_clearance = 0.01;
  sc.arm_base = Pose{{0.2, -0.5, 0.0}, Quat::identity()};
  return sc;
}

struct EnvSeedGuard {
  EnvSeedGuard(const char* value) { setenv("APPRUSS_SEED", value, 1); }
  ~EnvSeedGuard() { unsetenv("APPRUSS_SEED"); }
};

}  // namespace

TEST_CASE("load_scenario fills defaults for a minimal file") {
  const std::string path =
      write_temp("appruss_minimal.json", R"({"source": [0, 0, 0], "target": [1, 0, 0]})");
  const Scenario sc = load_scenario(path);
  CHECK(sc.unit_scale == doctest::Approx(0.4));
  CHECK(sc.repetitions == 10);
  CHECK(sc.seed == 0);
  CHECK(sc.planner.clearance == doctest::Approx(0.05));
  CHECK(sc.planner.n_check == 200);
  CHECK(sc.execution.n_waypoints == 50);
  CHECK(sc.execution.speed == doctest::Approx(0.1));
  CHECK(sc.execution.delay_max == doctest::Approx(0.3));
  CHECK(sc.noise.sigma_pos == doctest::Approx(0.002));
  CHECK(sc.standoff == doctest::Approx(0.02));
  CHECK(sc.arm_preset == "ur5e");
  CHECK(sc.obstacles.empty());
  CHECK(sc.markers.empty());
  // default workspace contains both endpoints with margin
  CHECK(point_cuboid_distance(sc.source, sc.planner.workspace) == doctest::Approx(0.0));
  CHECK(point_cuboid_distance(sc.target, sc.planner.workspace) == doctest::Approx(0.0));
}

TEST_CASE("load_scenario rejects invalid files with named fields") {
  const std::string bad_reps = write_temp(
      "appruss_reps.json", R"({"source": [0,0,0], "target": [1,0,0], "repetitions": 0})");
  CHECK_THROWS_WITH_AS(load_scenario(bad_reps), doctest::Contains("repetitions"),
                       ValidationError);

  const std::string same = write_temp(
      "appruss_same.json", R"({"source": [1,2,3], "target": [1,2,3]})");
  CHECK_THROWS_AS(load_scenario(same), ValidationError);

  const std::string unknown = write_temp(
      "appruss_unknown.json", R"({"source": [0,0,0], "target": [1,0,0], "obstcles": []})");
  CHECK_THROWS_WITH_AS(load_scenario(unknown), doctest::Contains("obstcles"), ValidationError);

  const std::string malformed = write_temp("appruss_malformed.json", "{not json");
  CHECK_THROWS_AS(load_scenario(malformed), ParseError);

  CHECK_THROWS_AS(load_scenario("/nonexistent/path.json"), ParseError);

  const std::string bad_box = write_temp(
      "appruss_box.json",
      R"({"source": [0,0,0], "target": [1,0,0],
          "obstacles": [{"center": [0,0,0], "half_extents": [0.1, 0.0, 0.1]}]})");
  CHECK_THROWS_WITH_AS(load_scenario(bad_box), doctest::Contains("half_extents"),
                       ValidationError);

  const std::string dup_ids = write_temp(
      "appruss_dup.json",
      R"({"source": [0,0,0], "target": [1,0,0], "desired_marker_id": 1,
          "markers": [{"id": 1, "position": [0,0,0]}, {"id": 1, "position": [1,0,0]}]})");
  CHECK_THROWS_AS(load_scenario(dup_ids), ValidationError);
}

TEST_CASE("load_scenario reads the shipped paper_fig5 file") {
  const Scenario sc = load_scenario(kScenarioDir + "/paper_fig5.json");
  CHECK(sc.name == "paper_fig5");
  CHECK(sc.source == Vec3{1, 0, 0});
  CHECK(sc.target == Vec3{0, 0, 1});
  REQUIRE(sc.obstacles.size() == 2);
  CHECK(sc.obstacles[0].center == Vec3{0.9, 0.1, 0});
  CHECK(sc.obstacles[1].center == Vec3{0.9, -0.1, 0});
  CHECK(sc.unit_scale == doctest::Approx(0.4));
}

TEST_CASE("APPRUSS_SEED overrides the scenario seed") {
  const std::string path = write_temp(
      "appruss_envseed.json", R"({"source": [0,0,0], "target": [1,0,0], "seed": 42})");
  CHECK(load_scenario(path).seed == 42);
  {
    EnvSeedGuard guard("31337");
    CHECK(load_scenario(path).seed == 31337);
  }
  CHECK(load_scenario(path).seed == 42);
  {
    EnvSeedGuard guard("not-a-number");
    CHECK_THROWS_AS(load_scenario(path), ValidationError);
  }
}

TEST_CASE("load_suite handles manifests, single files, and directories") {
  const auto suite = load_suite(kScenarioDir + "/suite_table1.json");
  REQUIRE(suite.size() == 6);
  CHECK(suite[0].name == "no_obstacles");
  CHECK(suite[5].name == "obstacle_5");

  const auto single = load_suite(kScenarioDir + "/paper_fig5.json");
  REQUIRE(single.size() == 1);
  CHECK(single[0].name == "paper_fig5");

  const auto dir = load_suite(kScenarioDir);
  CHECK(dir.size() >= 7);  // every scenario json in the directory
}

TEST_CASE("build_scene scales grid units to meters") {
  const Scenario sc = load_scenario(kScenarioDir + "/paper_fig5.json");
  const Scene scene = build_scene(sc);
  CHECK((scene.source - Vec3{0.4, 0, 0}).norm() < 1e-12);
  CHECK((scene.target - Vec3{0, 0, 0.4}).norm() < 1e-12);
  CHECK((scene.obstacles[0].center - Vec3{0.36, 0.04, 0}).norm() < 1e-12);
  CHECK((scene.obstacles[0].half_extents - Vec3{0.02, 0.02, 0.02}).norm() < 1e-12);
  // planner lengths stay in meters, workspace scales
  CHECK(scene.planner.clearance == doctest::Approx(sc.planner.clearance));
  CHECK(scene.planner.workspace.half_extents.x ==
        doctest::Approx(sc.planner.workspace.half_extents.x * 0.4));
}

TEST_CASE("run_benchmark on an unobstructed noiseless scenario always succeeds") {
  Scenario sc = quick_scenario();
  sc.execution.jitter_sigma = 0.0;
  sc.execution.delay_max = 0.0;
  const auto rows = run_benchmark({sc});
  REQUIRE(rows.size() == 2);  // no aggregate for a single scenario
  CHECK(rows[0].condition == Condition::WithPlanning);
  CHECK(rows[0].success_rate == doctest::Approx(100.0));
  CHECK(rows[1].condition == Condition::WithoutPlanning);
  CHECK(rows[1].success_rate == doctest::Approx(100.0));
}

TEST_CASE("run_benchmark marks unreachable scenarios as failures in both conditions") {
  Scenario sc = quick_scenario();
  sc.unit_scale = 10.0;  // blows the scene far past the arm's reach
  const auto rows = run_benchmark({sc});
  REQUIRE(rows.size() == 2);
  CHECK(rows[0].success_rate == doctest::Approx(0.0));
  CHECK(rows[1].success_rate == doctest::Approx(0.0));
  CHECK(rows[0].n_success == 0);
}

TEST_CASE("run_benchmark success_rate equals 100 * n_success / n_total") {
  const auto suite = load_suite(kScenarioDir + "/suite_table1.json");
  std::vector<Scenario> small(suite.begin(), suite.begin() + 3);
  for (auto& sc : small) sc.repetitions = 4;
  const auto rows = run_benchmark(small);
  REQUIRE(rows.size() == 2 * 3 + 2);
  for (const auto& row : rows) {
    CHECK(row.success_rate == doctest::Approx(100.0 * row.n_success / row.n_total));
    CHECK(row.n_total > 0);
  }
  // AGGREGATE rows close the list, one per condition
  CHECK(rows[rows.size() - 2].scenario_name == "AGGREGATE");
  CHECK(rows[rows.size() - 1].scenario_name == "AGGREGATE");
}

TEST_CASE("run_repetition is independent of the other condition and reproducible") {
  const Scenario sc = quick_scenario();
  const RunResult with_a = run_repetition(sc, Condition::WithPlanning, 1);
  const RunResult without = run_repetition(sc, Condition::WithoutPlanning, 1);
  const RunResult with_b = run_repetition(sc, Condition::WithPlanning, 1);
  CHECK(with_a.success == with_b.success);
  CHECK(with_a.moving_time == with_b.moving_time);
  // separate RNG streams per condition
  CHECK(with_a.moving_time != without.moving_time);
}

TEST_CASE("run_benchmark output is reproducible run to run") {
  const auto suite = load_suite(kScenarioDir + "/suite_table1.json");
  std::vector<Scenario> small(suite.begin(), suite.begin() + 2);
  const std::string a = emit_results(run_benchmark(small), OutputFormat::Csv);
  const std::string b = emit_results(run_benchmark(small), OutputFormat::Csv);
  CHECK(a == b);
}

TEST_CASE("perception failures mark repetitions failed without aborting") {
  Scenario sc = quick_scenario();
  Marker marker;
  marker.id = 1;
  marker.true_pose.position = sc.target;
  sc.markers = {marker};
  sc.desired_marker_id = 1;
  sc.noise.detection_prob = 0.0;  // marker never seen
  const auto rows = run_benchmark({sc});
  REQUIRE(rows.size() == 2);
  CHECK(rows[0].success_rate == doctest::Approx(0.0));
  CHECK(rows[1].success_rate == doctest::Approx(0.0));
  const RunResult rep = run_repetition(sc, Condition::WithPlanning, 0);
  CHECK(rep.failure_reason == FailureReason::PerceptionFailure);
}

TEST_CASE("emit_results CSV layout and row arithmetic") {
  CHECK(emit_results({}, OutputFormat::Csv) ==
        "scenario,condition,success_rate_pct,mean_moving_time_s,n_success,n_total\n");

  MetricsRow row;
  row.scenario_name = "demo";
  row.condition = Condition::WithPlanning;
  row.n_success = 9;
  row.n_total = 10;
  row.success_rate = 90.0;
  row.mean_moving_time = 29.217;
  const std::string csv = emit_results({row}, OutputFormat::Csv);
  CHECK(csv.find("demo,WithPlanning,90.0,29.217000,9,10") != std::string::npos);

  MetricsRow none = row;
  none.condition = Condition::WithoutPlanning;
  none.n_success = 0;
  none.success_rate = 0.0;
  none.mean_moving_time = 0.0;
  const std::string csv2 = emit_results({row, none}, OutputFormat::Csv);
  CHECK(csv2.find("demo,WithoutPlanning,0.0,,0,10") != std::string::npos);
}

TEST_CASE("emit_results table mode mirrors the two-condition layout") {
  MetricsRow with;
  with.scenario_name = "no_obstacles";
  with.condition = Condition::WithPlanning;
  with.n_success = 10;
  with.n_total = 10;
  with.success_rate = 100.0;
  with.mean_moving_time = 29.24;
  MetricsRow without = with;
  without.condition = Condition::WithoutPlanning;
  without.n_success = 9;
  without.success_rate = 90.0;
  without.mean_moving_time = 58.13;
  const std::string table = emit_results({with, without}, OutputFormat::Table);
  CHECK(table.find("With Planning") != std::string::npos);
  CHECK(table.find("Without Planning") != std::string::npos);
  CHECK(table.find("100%/29.2s") != std::string::npos);
  CHECK(table.find("90%/58.1s") != std::string::npos);
  CHECK(table.find("successful runs only") != std::string::npos);
}

TEST_CASE("emit_results CSV round-trips through parse_results_csv") {
  const auto suite = load_suite(kScenarioDir + "/suite_table1.json");
  std::vector<Scenario> small(suite.begin(), suite.begin() + 2);
  for (auto& sc : small) sc.repetitions = 3;
  const auto rows = run_benchmark(small);
  const auto parsed = parse_results_csv(emit_results(rows, OutputFormat::Csv));
  REQUIRE(parsed.size() == rows.size());
  for (std::size_t i = 0; i < rows.size(); ++i) {
    CHECK(parsed[i].scenario_name == rows[i].scenario_name);
    CHECK(parsed[i].condition == rows[i].condition);
    CHECK(parsed[i].n_success == rows[i].n_success);
    CHECK(parsed[i].n_total == rows[i].n_total);
    CHECK(parsed[i].success_rate == doctest::Approx(rows[i].success_rate).epsilon(1e-9));
    if (rows[i].n_success > 0) {
      CHECK(parsed[i].mean_moving_time ==
            doctest::Approx(rows[i].mean_moving_time).epsilon(1e-6));
    }
  }
}
