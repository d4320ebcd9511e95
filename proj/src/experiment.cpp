#include "appruss/experiment.hpp"

#include <algorithm>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <set>
#include <sstream>

#include "appruss/errors.hpp"
#include "appruss/rng.hpp"
#include "json.hpp"

namespace appruss {

namespace {

using nlohmann::json;

void check_keys(const json& obj, const std::set<std::string>& allowed, const std::string& ctx) {
  for (const auto& [key, value] : obj.items()) {
    if (!allowed.count(key)) {
      throw ValidationError(ctx.empty() ? key : ctx + "." + key, "unknown field");
    }
  }
}

double get_number(const json& obj, const std::string& key, double fallback) {
  if (!obj.contains(key)) return fallback;
  if (!obj[key].is_number()) throw ValidationError(key, "must be a number");
  return obj[key].get<double>();
}

int get_int(const json& obj, const std::string& key, int fallback) {
  if (!obj.contains(key)) return fallback;
  if (!obj[key].is_number_integer()) throw ValidationError(key, "must be an integer");
  return obj[key].get<int>();
}

Vec3 parse_vec3(const json& v, const std::string& ctx) {
  if (!v.is_array() || v.size() != 3 || !v[0].is_number() || !v[1].is_number() ||
      !v[2].is_number()) {
    throw ValidationError(ctx, "must be an array of 3 numbers");
  }
  const Vec3 out{v[0].get<double>(), v[1].get<double>(), v[2].get<double>()};
  if (!out.finite()) throw ValidationError(ctx, "components must be finite");
  return out;
}

Quat parse_quat(const json& v, const std::string& ctx) {
  if (!v.is_array() || v.size() != 4 || !v[0].is_number() || !v[1].is_number() ||
      !v[2].is_number() || !v[3].is_number()) {
    throw ValidationError(ctx, "must be an array of 4 numbers (w, x, y, z)");
  }
  const Quat q{v[0].get<double>(), v[1].get<double>(), v[2].get<double>(), v[3].get<double>()};
  if (std::abs(q.norm() - 1.0) > 1e-9) {
    throw ValidationError(ctx, "quaternion norm must be within 1e-9 of 1");
  }
  return q;
}

Cuboid parse_cuboid(const json& v, const std::string& ctx) {
  if (!v.is_object()) throw ValidationError(ctx, "must be an object");
  check_keys(v, {"center", "half_extents"}, ctx);
  if (!v.contains("center") || !v.contains("half_extents")) {
    throw ValidationError(ctx, "requires center and half_extents");
  }
  Cuboid box;
  box.center = parse_vec3(v["center"], ctx + ".center");
  box.half_extents = parse_vec3(v["half_extents"], ctx + ".half_extents");
  if (box.half_extents.x <= 0.0 || box.half_extents.y <= 0.0 || box.half_extents.z <= 0.0) {
    throw ValidationError(ctx + ".half_extents", "components must be > 0");
  }
  return box;
}

Cuboid default_workspace(const Vec3& source, const Vec3& target) {
  const Vec3 lo{std::min(source.x, target.x), std::min(source.y, target.y),
                std::min(source.z, target.z)};
  const Vec3 hi{std::max(source.x, target.x), std::max(source.y, target.y),
                std::max(source.z, target.z)};
  const double inflate = std::max(1.0, (target - source).norm());
  Cuboid box;
  box.center = (lo + hi) * 0.5;
  box.half_extents = (hi - lo) * 0.5 + Vec3{inflate, inflate, inflate};
  return box;
}

PlannerConfig parse_planner(const json& v, const Vec3& source, const Vec3& target) {
  PlannerConfig cfg;
  cfg.workspace = default_workspace(source, target);
  if (v.is_null()) return cfg;
  if (!v.is_object()) throw ValidationError("planner", "must be an object");
  check_keys(v, {"clearance", "n_check", "step", "max_iters", "workspace"}, "planner");
  cfg.clearance = get_number(v, "clearance", cfg.clearance);
  cfg.n_check = get_int(v, "n_check", cfg.n_check);
  cfg.step = get_number(v, "step", cfg.step);
  cfg.max_iters = get_int(v, "max_iters", cfg.max_iters);
  if (v.contains("workspace")) cfg.workspace = parse_cuboid(v["workspace"], "planner.workspace");
  if (cfg.clearance < 0.0) throw ValidationError("planner.clearance", "must be >= 0");
  if (cfg.n_check < 2) throw ValidationError("planner.n_check", "must be >= 2");
  if (cfg.step <= 0.0) throw ValidationError("planner.step", "must be > 0");
  if (cfg.max_iters < 1) throw ValidationError("planner.max_iters", "must be >= 1");
  return cfg;
}

ExecutionConfig parse_execution(const json& v) {
  ExecutionConfig cfg;
  if (v.is_null()) return cfg;
  if (!v.is_object()) throw ValidationError("execution", "must be an object");
  check_keys(v,
             {"n_waypoints", "speed", "delay_max", "jitter_sigma", "collision_clearance",
              "pos_tol", "max_retries"},
             "execution");
  cfg.n_waypoints = get_int(v, "n_waypoints", cfg.n_waypoints);
  cfg.speed = get_number(v, "speed", cfg.speed);
  cfg.delay_max = get_number(v, "delay_max", cfg.delay_max);
  cfg.jitter_sigma = get_number(v, "jitter_sigma", cfg.jitter_sigma);
  cfg.collision_clearance = get_number(v, "collision_clearance", cfg.collision_clearance);
  cfg.pos_tol = get_number(v, "pos_tol", cfg.pos_tol);
  cfg.max_retries = get_int(v, "max_retries", cfg.max_retries);
  if (cfg.n_waypoints < 2) throw ValidationError("execution.n_waypoints", "must be >= 2");
  if (cfg.speed <= 0.0) throw ValidationError("execution.speed", "must be > 0");
  if (cfg.delay_max < 0.0) throw ValidationError("execution.delay_max", "must be >= 0");
  if (cfg.jitter_sigma < 0.0) throw ValidationError("execution.jitter_sigma", "must be >= 0");
  if (cfg.collision_clearance < 0.0) {
    throw ValidationError("execution.collision_clearance", "must be >= 0");
  }
  if (cfg.pos_tol < 0.0) throw ValidationError("execution.pos_tol", "must be >= 0");
  if (cfg.max_retries < 0) throw ValidationError("execution.max_retries", "must be >= 0");
  return cfg;
}

NoiseModel parse_noise(const json& v) {
  NoiseModel noise;
  if (v.is_null()) return noise;
  if (!v.is_object()) throw ValidationError("noise", "must be an object");
  check_keys(v, {"sigma_pos", "sigma_rot", "detection_prob"}, "noise");
  noise.sigma_pos = get_number(v, "sigma_pos", noise.sigma_pos);
  noise.sigma_rot = get_number(v, "sigma_rot", noise.sigma_rot);
  noise.detection_prob = get_number(v, "detection_prob", noise.detection_prob);
  if (noise.sigma_pos < 0.0) throw ValidationError("noise.sigma_pos", "must be >= 0");
  if (noise.sigma_rot < 0.0) throw ValidationError("noise.sigma_rot", "must be >= 0");
  if (noise.detection_prob < 0.0 || noise.detection_prob > 1.0) {
    throw ValidationError("noise.detection_prob", "must be in [0, 1]");
  }
  return noise;
}

std::uint64_t env_seed_override(bool& present) {
  present = false;
  const char* raw = std::getenv("APPRUSS_SEED");
  if (raw == nullptr || *raw == '\0') return 0;
  char* end = nullptr;
  const unsigned long long value = std::strtoull(raw, &end, 10);
  if (end == raw || *end != '\0') {
    throw ValidationError("APPRUSS_SEED", "must be an unsigned integer");
  }
  present = true;
  return static_cast<std::uint64_t>(value);
}

constexpr std::uint64_t kPerceptionStream = 1;
constexpr std::uint64_t kExecutionStream = 2;

RunResult run_in_scene(const Scene& scene, const Scenario& scenario, Condition condition,
                       int repetition) {
  const std::uint64_t condition_id = condition == Condition::WithPlanning ? 0 : 1;
  const std::uint64_t run_seed =
      mix_seed(scenario.seed, condition_id, static_cast<std::uint64_t>(repetition));

  Vec3 goal = scene.target;
  if (!scene.markers.empty()) {
    const auto observations =
        observe_markers(scene.markers, scenario.noise, mix_seed(run_seed, kPerceptionStream));
    try {
      const Pose marker_pose = select_target(observations, scenario.desired_marker_id);
      goal = approach_point(marker_pose, scenario.standoff);
    } catch (const TargetNotFound&) {
      return RunResult{false, 0.0, FailureReason::PerceptionFailure};
    }
  }

  const std::uint64_t exec_seed = mix_seed(run_seed, kExecutionStream);
  if (condition == Condition::WithPlanning) {
    CubicBezier curve;
    try {
      curve = plan_path(scene.source, goal, scene.obstacles, scene.planner).curve;
    } catch (const Error&) {
      // No collision-free path found; the repetition fails as a collision.
      return RunResult{false, 0.0, FailureReason::Collision};
    }
    return execute_trajectory(curve, scene.arm, scene.obstacles, scenario.execution, exec_seed);
  }
  return execute_reactive_baseline(scene.source, goal, scene.arm, scene.obstacles,
                                   scenario.execution, exec_seed);
}

std::string format_rate(double rate) {
  char buf[32];
  if (rate == std::floor(rate)) {
    std::snprintf(buf, sizeof(buf), "%.0f%%", rate);
  } else {
    std::snprintf(buf, sizeof(buf), "%.1f%%", rate);
  }
  return buf;
}

std::string format_cell(const MetricsRow* row) {
  if (row == nullptr) return "-";
  std::string cell = format_rate(row->success_rate);
  cell += "/";
  if (row->n_success > 0) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.1fs", row->mean_moving_time);
    cell += buf;
  } else {
    cell += "-";
  }
  return cell;
}

}  // namespace

const char* to_string(Condition condition) {
  return condition == Condition::WithPlanning ? "WithPlanning" : "WithoutPlanning";
}

Scene build_scene(const Scenario& scenario) {
  const double s = scenario.unit_scale;
  Scene scene;
  scene.source = scenario.source * s;
  scene.target = scenario.target * s;
  scene.obstacles.reserve(scenario.obstacles.size());
  for (const auto& box : scenario.obstacles) {
    scene.obstacles.push_back(Cuboid{box.center * s, box.half_extents * s});
  }
  scene.markers.reserve(scenario.markers.size());
  for (const auto& marker : scenario.markers) {
    scene.markers.push_back(
        Marker{marker.id, Pose{marker.true_pose.position * s, marker.true_pose.orientation}});
  }
  scene.planner = scenario.planner;
  scene.planner.workspace.center = scenario.planner.workspace.center * s;
  scene.planner.workspace.half_extents = scenario.planner.workspace.half_extents * s;
  scene.arm = arm_preset(scenario.arm_preset, scenario.arm_base);
  return scene;
}

Scenario load_scenario(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open scenario file: " + path);
  json doc;
  try {
    in >> doc;
  } catch (const json::exception& e) {
    throw ParseError("malformed scenario file " + path + ": " + e.what());
  }
  if (!doc.is_object()) throw ParseError("scenario file must contain a JSON object: " + path);

  check_keys(doc,
             {"schema", "name", "unit_scale", "source", "target", "markers", "desired_marker_id",
              "obstacles", "seed", "repetitions", "planner", "execution", "noise", "standoff",
              "arm"},
             "");
  if (doc.contains("schema") && (!doc["schema"].is_number_integer() || doc["schema"] != 1)) {
    throw ValidationError("schema", "unsupported schema version (expected 1)");
  }

  Scenario sc;
  if (doc.contains("name") && !doc["name"].is_string()) {
    throw ValidationError("name", "must be a string");
  }
  sc.name = doc.contains("name") ? doc["name"].get<std::string>()
                                 : std::filesystem::path(path).stem().string();
  sc.unit_scale = get_number(doc, "unit_scale", sc.unit_scale);
  if (sc.unit_scale <= 0.0) throw ValidationError("unit_scale", "must be > 0");

  if (!doc.contains("source")) throw ValidationError("source", "required");
  if (!doc.contains("target")) throw ValidationError("target", "required");
  sc.source = parse_vec3(doc["source"], "source");
  sc.target = parse_vec3(doc["target"], "target");
  if ((sc.target - sc.source).norm() == 0.0) {
    throw ValidationError("target", "must differ from source");
  }

  if (doc.contains("obstacles")) {
    if (!doc["obstacles"].is_array()) throw ValidationError("obstacles", "must be an array");
    int idx = 0;
    for (const auto& item : doc["obstacles"]) {
      sc.obstacles.push_back(parse_cuboid(item, "obstacles[" + std::to_string(idx++) + "]"));
    }
  }

  if (doc.contains("markers")) {
    if (!doc["markers"].is_array()) throw ValidationError("markers", "must be an array");
    std::set<int> ids;
    int idx = 0;
    for (const auto& item : doc["markers"]) {
      const std::string ctx = "markers[" + std::to_string(idx++) + "]";
      check_keys(item, {"id", "position", "orientation"}, ctx);
      if (!item.contains("id") || !item["id"].is_number_integer()) {
        throw ValidationError(ctx + ".id", "required integer");
      }
      Marker marker;
      marker.id = item["id"].get<int>();
      if (!ids.insert(marker.id).second) {
        throw ValidationError(ctx + ".id", "marker ids must be unique");
      }
      if (!item.contains("position")) throw ValidationError(ctx + ".position", "required");
      marker.true_pose.position = parse_vec3(item["position"], ctx + ".position");
      if (item.contains("orientation")) {
        marker.true_pose.orientation = parse_quat(item["orientation"], ctx + ".orientation");
      }
      sc.markers.push_back(marker);
    }
  }
  if (!sc.markers.empty()) {
    if (!doc.contains("desired_marker_id")) {
      throw ValidationError("desired_marker_id", "required when markers are present");
    }
    sc.desired_marker_id = get_int(doc, "desired_marker_id", -1);
  } else if (doc.contains("desired_marker_id")) {
    sc.desired_marker_id = get_int(doc, "desired_marker_id", -1);
  }

  if (doc.contains("seed")) {
    if (!doc["seed"].is_number_integer() || doc["seed"].get<double>() < 0) {
      throw ValidationError("seed", "must be a nonnegative integer");
    }
    sc.seed = doc["seed"].get<std::uint64_t>();
  }
  sc.repetitions = get_int(doc, "repetitions", sc.repetitions);
  if (sc.repetitions < 1) throw ValidationError("repetitions", "must be >= 1");

  sc.planner = parse_planner(doc.contains("planner") ? doc["planner"] : json(), sc.source,
                             sc.target);
  sc.execution = parse_execution(doc.contains("execution") ? doc["execution"] : json());
  sc.noise = parse_noise(doc.contains("noise") ? doc["noise"] : json());

  sc.standoff = get_number(doc, "standoff", sc.standoff);
  if (sc.standoff < 0.0) throw ValidationError("standoff", "must be >= 0");

  if (doc.contains("arm")) {
    const json& arm = doc["arm"];
    if (!arm.is_object()) throw ValidationError("arm", "must be an object");
    check_keys(arm, {"preset", "base_position", "base_orientation"}, "arm");
    if (arm.contains("preset")) {
      if (!arm["preset"].is_string()) throw ValidationError("arm.preset", "must be a string");
      sc.arm_preset = arm["preset"].get<std::string>();
    }
    if (arm.contains("base_position")) {
      sc.arm_base.position = parse_vec3(arm["base_position"], "arm.base_position");
    }
    if (arm.contains("base_orientation")) {
      sc.arm_base.orientation = parse_quat(arm["base_orientation"], "arm.base_orientation");
    }
  }
  arm_preset(sc.arm_preset, sc.arm_base);  // validates the preset name

  bool has_env = false;
  const std::uint64_t env_seed = env_seed_override(has_env);
  if (has_env) sc.seed = env_seed;
  return sc;
}

namespace {

bool is_suite_manifest(const std::string& path) {
  std::ifstream in(path);
  if (!in) return false;
  json doc;
  try {
    in >> doc;
  } catch (const json::exception&) {
    return false;
  }
  return doc.is_object() && doc.contains("scenarios");
}

}  // namespace

std::vector<Scenario> load_suite(const std::string& path) {
  namespace fs = std::filesystem;
  std::vector<Scenario> scenarios;

  if (fs::is_directory(path)) {
    std::vector<std::string> files;
    for (const auto& entry : fs::directory_iterator(path)) {
      if (entry.path().extension() == ".json" && !is_suite_manifest(entry.path().string())) {
        files.push_back(entry.path().string());
      }
    }
    std::sort(files.begin(), files.end());
    for (const auto& file : files) scenarios.push_back(load_scenario(file));
    if (scenarios.empty()) throw ParseError("no scenario files in directory: " + path);
    return scenarios;
  }

  std::ifstream in(path);
  if (!in) throw ParseError("cannot open suite file: " + path);
  json doc;
  try {
    in >> doc;
  } catch (const json::exception& e) {
    throw ParseError("malformed suite file " + path + ": " + e.what());
  }
  if (doc.is_object() && doc.contains("scenarios")) {
    check_keys(doc, {"schema", "name", "scenarios"}, "");
    if (!doc["scenarios"].is_array() || doc["scenarios"].empty()) {
      throw ValidationError("scenarios", "must be a non-empty array of file paths");
    }
    const fs::path base = fs::path(path).parent_path();
    for (const auto& item : doc["scenarios"]) {
      if (!item.is_string()) throw ValidationError("scenarios", "entries must be file paths");
      scenarios.push_back(load_scenario((base / item.get<std::string>()).string()));
    }
    return scenarios;
  }
  scenarios.push_back(load_scenario(path));
  return scenarios;
}

RunResult run_repetition(const Scenario& scenario, Condition condition, int repetition) {
  if (repetition < 0) throw std::domain_error("run_repetition: repetition must be >= 0");
  return run_in_scene(build_scene(scenario), scenario, condition, repetition);
}

std::vector<MetricsRow> run_benchmark(const std::vector<Scenario>& scenarios) {
  std::vector<MetricsRow> rows;
  struct Totals {
    int n_success = 0;
    int n_total = 0;
    double time_sum = 0.0;
  };
  Totals aggregate[2];

  for (const auto& scenario : scenarios) {
    const Scene scene = build_scene(scenario);
    for (const Condition condition : {Condition::WithPlanning, Condition::WithoutPlanning}) {
      MetricsRow row;
      row.scenario_name = scenario.name;
      row.condition = condition;
      row.n_total = scenario.repetitions;
      double time_sum = 0.0;
      for (int rep = 0; rep < scenario.repetitions; ++rep) {
        const RunResult result = run_in_scene(scene, scenario, condition, rep);
        if (result.success) {
          ++row.n_success;
          time_sum += result.moving_time;
        }
      }
      row.success_rate = 100.0 * row.n_success / row.n_total;
      row.mean_moving_time = row.n_success > 0 ? time_sum / row.n_success : 0.0;
      rows.push_back(row);

      Totals& agg = aggregate[condition == Condition::WithPlanning ? 0 : 1];
      agg.n_success += row.n_success;
      agg.n_total += row.n_total;
      agg.time_sum += time_sum;
    }
  }

  if (scenarios.size() > 1) {
    for (const Condition condition : {Condition::WithPlanning, Condition::WithoutPlanning}) {
      const Totals& agg = aggregate[condition == Condition::WithPlanning ? 0 : 1];
      MetricsRow row;
      row.scenario_name = "AGGREGATE";
      row.condition = condition;
      row.n_success = agg.n_success;
      row.n_total = agg.n_total;
      row.success_rate = agg.n_total > 0 ? 100.0 * agg.n_success / agg.n_total : 0.0;
      row.mean_moving_time = agg.n_success > 0 ? agg.time_sum / agg.n_success : 0.0;
      rows.push_back(row);
    }
  }
  return rows;
}

std::string emit_results(const std::vector<MetricsRow>& rows, OutputFormat format) {
  std::ostringstream out;
  if (format == OutputFormat::Csv) {
    out << "scenario,condition,success_rate_pct,mean_moving_time_s,n_success,n_total\n";
    for (const auto& row : rows) {
      char buf[160];
      std::snprintf(buf, sizeof(buf), "%.1f", row.success_rate);
      out << row.scenario_name << ',' << to_string(row.condition) << ',' << buf << ',';
      if (row.n_success > 0) {
        std::snprintf(buf, sizeof(buf), "%.6f", row.mean_moving_time);
        out << buf;
      }
      out << ',' << row.n_success << ',' << row.n_total << '\n';
    }
    return out.str();
  }

  // Table mode: one line per scenario, the two conditions side by side.
  std::vector<std::string> names;
  std::vector<const MetricsRow*> with(rows.size(), nullptr), without(rows.size(), nullptr);
  auto index_of = [&](const std::string& name) {
    for (std::size_t i = 0; i < names.size(); ++i) {
      if (names[i] == name) return i;
    }
    names.push_back(name);
    return names.size() - 1;
  };
  for (const auto& row : rows) {
    const std::size_t i = index_of(row.scenario_name);
    (row.condition == Condition::WithPlanning ? with[i] : without[i]) = &row;
  }

  std::size_t name_w = std::string("Scenario").size();
  std::size_t with_w = std::string("With Planning").size();
  std::size_t without_w = std::string("Without Planning").size();
  std::vector<std::string> with_cells, without_cells;
  for (std::size_t i = 0; i < names.size(); ++i) {
    with_cells.push_back(format_cell(with[i]));
    without_cells.push_back(format_cell(without[i]));
    name_w = std::max(name_w, names[i].size());
    with_w = std::max(with_w, with_cells[i].size());
    without_w = std::max(without_w, without_cells[i].size());
  }

  auto pad = [](const std::string& s, std::size_t w) {
    return s + std::string(w - s.size(), ' ');
  };
  out << pad("Scenario", name_w) << "  " << pad("With Planning", with_w) << "  "
      << "Without Planning\n";
  out << std::string(name_w + with_w + without_w + 4, '-') << '\n';
  for (std::size_t i = 0; i < names.size(); ++i) {
    out << pad(names[i], name_w) << "  " << pad(with_cells[i], with_w) << "  "
        << without_cells[i] << '\n';
  }
  out << "(moving time averaged over successful runs only; '-' when none)\n";
  return out.str();
}

std::vector<MetricsRow> parse_results_csv(const std::string& text) {
  std::istringstream in(text);
  std::string line;
  if (!std::getline(in, line) ||
      line != "scenario,condition,success_rate_pct,mean_moving_time_s,n_success,n_total") {
    throw ParseError("parse_results_csv: missing or unexpected header");
  }
  std::vector<MetricsRow> rows;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::vector<std::string> fields;
    std::string field;
    std::istringstream ls(line);
    while (std::getline(ls, field, ',')) fields.push_back(field);
    if (line.back() == ',') fields.push_back("");
    if (fields.size() != 6) throw ParseError("parse_results_csv: expected 6 fields: " + line);

    MetricsRow row;
    row.scenario_name = fields[0];
    if (fields[1] == "WithPlanning") {
      row.condition = Condition::WithPlanning;
    } else if (fields[1] == "WithoutPlanning") {
      row.condition = Condition::WithoutPlanning;
    } else {
      throw ParseError("parse_results_csv: unknown condition: " + fields[1]);
    }
    row.success_rate = std::stod(fields[2]);
    row.mean_moving_time = fields[3].empty() ? 0.0 : std::stod(fields[3]);
    row.n_success = std::stoi(fields[4]);
    row.n_total = std::stoi(fields[5]);
    rows.push_back(row);
  }
  return rows;
}

}  // namespace appruss
