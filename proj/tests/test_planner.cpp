#include <cmath>
#include <limits>

#include "appruss/errors.hpp"
#include "appruss/planner.hpp"
#include "appruss/rng.hpp"
#include "doctest.h"

using namespace appruss;

namespace {

PlannerConfig roomy_config() {
  PlannerConfig cfg;
  cfg.clearance = 0.05;
  cfg.step = 0.02;
  cfg.n_check = 200;
  cfg.max_iters = 200;
  cfg.workspace = Cuboid{{0.5, 0, 0.5}, {2, 2, 2}};
  return cfg;
}

}  // namespace

TEST_CASE("plan_path with no obstacles keeps the straight segment") {
  const Vec3 src{0, 0, 0}, tgt{1, 2, 3};
  const PlanResult plan = plan_path(src, tgt, {}, roomy_config());
  CHECK(plan.iterations_used == 0);
  CHECK(plan.min_clearance_achieved == std::numeric_limits<double>::infinity());
  CHECK(plan.curve.p0 == src);
  CHECK(plan.curve.p3 == tgt);
  CHECK((plan.curve.p1 - (src + (tgt - src) * (1.0 / 3))).norm() < 1e-12);
  CHECK((plan.curve.p2 - (src + (tgt - src) * (2.0 / 3))).norm() < 1e-12);
}

TEST_CASE("plan_path clears the two-cuboid grid scene") {
  // Source (1,0,0), target (0,0,1), the flanking pair at (0.9, +-0.1, 0).
  const Vec3 src{1, 0, 0}, tgt{0, 0, 1};
  const std::vector<Cuboid> obstacles = {Cuboid{{0.9, 0.1, 0}, {0.05, 0.05, 0.05}},
                                         Cuboid{{0.9, -0.1, 0}, {0.05, 0.05, 0.05}}};
  const PlannerConfig cfg = roomy_config();
  const PlanResult plan = plan_path(src, tgt, obstacles, cfg);
  CHECK(plan.curve.p0 == src);
  CHECK(plan.curve.p3 == tgt);
  CHECK(plan.min_clearance_achieved >= cfg.clearance);
  // Dense re-sampling (10x the planner's density) confirms the clearance.
  const double dense = validate_curve(plan.curve, obstacles, 10 * cfg.n_check);
  CHECK(dense >= cfg.clearance - cfg.clearance / 10);
}

TEST_CASE("plan_path rejects bad endpoints") {
  const std::vector<Cuboid> obstacles = {Cuboid{{0.5, 0, 0}, {0.1, 0.1, 0.1}}};
  CHECK_THROWS_AS(plan_path({0, 0, 0}, {0, 0, 0}, obstacles, roomy_config()), InvalidEndpoints);
  // target inside an obstacle
  CHECK_THROWS_AS(plan_path({0, 0, 0}, {0.5, 0, 0}, obstacles, roomy_config()), InvalidEndpoints);
  // source within clearance of an obstacle
  CHECK_THROWS_AS(plan_path({0.39, 0, 0}, {2, 0, 0}, obstacles, roomy_config()),
                  InvalidEndpoints);
}

TEST_CASE("plan_path fails when the workspace clamp prevents escape") {
  PlannerConfig cfg = roomy_config();
  // Workspace barely wider than the segment; the blocking wall cannot be
  // escaped without leaving it.
  cfg.workspace = Cuboid{{0.5, 0, 0}, {0.6, 0.02, 0.02}};
  const std::vector<Cuboid> wall = {Cuboid{{0.5, 0, 0}, {0.08, 0.3, 0.3}}};
  CHECK_THROWS_AS(plan_path({0, 0, 0}, {1, 0, 0}, wall, cfg), PlanningFailed);
}

TEST_CASE("plan_path never moves the endpoints") {
  Rng rng(7);
  for (int i = 0; i < 50; ++i) {
    const Vec3 src{0, 0, rng.uniform(0, 0.3)};
    const Vec3 tgt{1, 0, rng.uniform(0.2, 0.5)};
    const std::vector<Cuboid> obstacles = {
        Cuboid{{rng.uniform(0.3, 0.7), rng.uniform(-0.05, 0.05), rng.uniform(0.1, 0.4)},
               {0.08, 0.08, 0.08}}};
    PlannerConfig cfg = roomy_config();
    cfg.clearance = 0.03;
    if (point_cuboid_distance(src, obstacles[0]) < cfg.clearance ||
        point_cuboid_distance(tgt, obstacles[0]) < cfg.clearance) {
      continue;
    }
    const PlanResult plan = plan_path(src, tgt, obstacles, cfg);
    CHECK(plan.curve.p0 == src);
    CHECK(plan.curve.p3 == tgt);
  }
}

TEST_CASE("plan_path difficulty grows as the obstacle approaches the segment") {
  PlannerConfig cfg = roomy_config();
  int prev = -1;
  for (double dist : {0.30, 0.25, 0.20, 0.15, 0.10, 0.05, 0.0}) {
    const std::vector<Cuboid> obstacles = {Cuboid{{0.5, dist, 0.5}, {0.1, 0.1, 0.1}}};
    const PlanResult plan = plan_path({0, 0, 0.5}, {1, 0, 0.5}, obstacles, cfg);
    CHECK(plan.iterations_used >= prev);
    prev = plan.iterations_used;
  }
  CHECK(prev > 0);
}

TEST_CASE("plan_path is deterministic") {
  const std::vector<Cuboid> obstacles = {Cuboid{{0.5, 0, 0.45}, {0.1, 0.1, 0.1}}};
  const PlanResult a = plan_path({0, 0, 0.5}, {1, 0, 0.5}, obstacles, roomy_config());
  const PlanResult b = plan_path({0, 0, 0.5}, {1, 0, 0.5}, obstacles, roomy_config());
  CHECK(a.iterations_used == b.iterations_used);
  CHECK(a.min_clearance_achieved == b.min_clearance_achieved);
  CHECK(a.curve.p1 == b.curve.p1);
  CHECK(a.curve.p2 == b.curve.p2);
}

TEST_CASE("straight_line_path control points at the thirds") {
  const CubicBezier line = straight_line_path({0, 0, 0}, {3, 0, 0});
  CHECK(line.p1 == Vec3{1, 0, 0});
  CHECK(line.p2 == Vec3{2, 0, 0});
  CHECK(arc_length(line, 1000) == doctest::Approx(3.0).epsilon(1e-9));
  CHECK((bezier_eval(line, 0.5) - Vec3{1.5, 0, 0}).norm() < 1e-12);
  CHECK_THROWS_AS(straight_line_path({1, 2, 3}, {1, 2, 3}), InvalidEndpoints);
}

TEST_CASE("validate_curve sentinel, touching, and offset cases") {
  const CubicBezier line = straight_line_path({-3, 0.8, 0}, {3, 0.8, 0});
  CHECK(validate_curve(line, {}, 100) == std::numeric_limits<double>::infinity());

  const Cuboid box{{0, 0, 0}, {0.5, 0.5, 0.5}};
  const CubicBezier through = straight_line_path({-3, 0, 0}, {3, 0, 0});
  CHECK(validate_curve(through, {box}, 1001) == doctest::Approx(0.0));

  const CubicBezier offset = straight_line_path({-3, 0.8, 0}, {3, 0.8, 0});
  CHECK(validate_curve(offset, {box}, 1001) == doctest::Approx(0.3).epsilon(1e-3));

  CHECK_THROWS_AS(validate_curve(line, {box}, 1), std::domain_error);
}

TEST_CASE("successful plans survive 10x-density revalidation") {
  Rng rng(123);
  int planned = 0;
  for (int i = 0; i < 50; ++i) {
    const int n_obs = 1 + static_cast<int>(rng.uniform() * 4);
    std::vector<Cuboid> obstacles;
    for (int k = 0; k < n_obs; ++k) {
      obstacles.push_back(
          Cuboid{{rng.uniform(0.2, 0.8), rng.uniform(-0.3, 0.3), rng.uniform(0.0, 0.5)},
                 {rng.uniform(0.02, 0.12), rng.uniform(0.02, 0.12), rng.uniform(0.02, 0.12)}});
    }
    PlannerConfig cfg = roomy_config();
    cfg.clearance = 0.03;
    cfg.max_iters = 150;
    cfg.workspace = Cuboid{{0.5, 0, 0.4}, {1.0, 0.8, 0.6}};
    const Vec3 src{0, 0, rng.uniform(0.0, 0.3)};
    const Vec3 tgt{1, 0, rng.uniform(0.2, 0.6)};
    bool feasible = true;
    for (const auto& box : obstacles) {
      if (point_cuboid_distance(src, box) < cfg.clearance ||
          point_cuboid_distance(tgt, box) < cfg.clearance) {
        feasible = false;
      }
    }
    if (!feasible) continue;
    try {
      const PlanResult plan = plan_path(src, tgt, obstacles, cfg);
      ++planned;
      CHECK(validate_curve(plan.curve, obstacles, 10 * cfg.n_check) >=
            cfg.clearance - cfg.clearance / 10);
    } catch (const PlanningFailed&) {
      // an honest failure, not a soundness violation
    }
  }
  CHECK(planned > 20);
}
