#include "appruss/planner.hpp"

#include <algorithm>
#include <limits>
#include <stdexcept>

#include "appruss/errors.hpp"

namespace appruss {

namespace {

/// Distance to the box surface, negative inside (penetration depth). Ranks
/// "deepest violating sample" sensibly when the curve passes through a box,
/// where the clamped distance would tie at zero.
double signed_box_distance(const Vec3& p, const Cuboid& box) {
  const double outside = point_cuboid_distance(p, box);
  if (outside > 0.0) return outside;
  const Vec3 d = p - box.center;
  const double slack_x = box.half_extents.x - std::abs(d.x);
  const double slack_y = box.half_extents.y - std::abs(d.y);
  const double slack_z = box.half_extents.z - std::abs(d.z);
  return -std::min({slack_x, slack_y, slack_z});
}

struct DeepestViolation {
  double min_dist = std::numeric_limits<double>::infinity();  // clamped, >= 0
  double min_depth = std::numeric_limits<double>::infinity();  // signed
  Vec3 sample;
  Vec3 obstacle_center;
};

DeepestViolation scan_curve(const CubicBezier& curve, const std::vector<Cuboid>& obstacles,
                            int n_check) {
  DeepestViolation v;
  for (int i = 0; i < n_check; ++i) {
    const double t = static_cast<double>(i) / static_cast<double>(n_check - 1);
    const Vec3 pt = bezier_eval(curve, t);
    for (const auto& box : obstacles) {
      v.min_dist = std::min(v.min_dist, point_cuboid_distance(pt, box));
      const double depth = signed_box_distance(pt, box);
      if (depth < v.min_depth) {
        v.min_depth = depth;
        v.sample = pt;
        v.obstacle_center = box.center;
      }
    }
  }
  return v;
}

Vec3 clamp_to_box(const Vec3& p, const Cuboid& box) {
  const Vec3 lo = box.center - box.half_extents;
  const Vec3 hi = box.center + box.half_extents;
  return {std::clamp(p.x, lo.x, hi.x), std::clamp(p.y, lo.y, hi.y), std::clamp(p.z, lo.z, hi.z)};
}

Vec3 perpendicular_part(const Vec3& v, const Vec3& axis) { return v - v.dot(axis) * axis; }

}  // namespace

PlanResult plan_path(const Vec3& source, const Vec3& target, const std::vector<Cuboid>& obstacles,
                     const PlannerConfig& cfg) {
  if (cfg.n_check < 2 || cfg.step <= 0.0 || cfg.max_iters < 1 || cfg.clearance < 0.0) {
    throw std::domain_error("plan_path: invalid planner configuration");
  }
  if ((target - source).norm() == 0.0) {
    throw InvalidEndpoints("plan_path: source equals target");
  }
  for (const auto& box : obstacles) {
    if (point_cuboid_distance(source, box) < cfg.clearance) {
      throw InvalidEndpoints("plan_path: source closer than clearance to an obstacle");
    }
    if (point_cuboid_distance(target, box) < cfg.clearance) {
      throw InvalidEndpoints("plan_path: target closer than clearance to an obstacle");
    }
  }

  const Vec3 axis = (target - source).normalized();
  CubicBezier curve;
  curve.p0 = source;
  curve.p1 = source + (target - source) * (1.0 / 3.0);
  curve.p2 = source + (target - source) * (2.0 / 3.0);
  curve.p3 = target;

  int iterations = 0;
  while (true) {
    const DeepestViolation v = scan_curve(curve, obstacles, cfg.n_check);
    if (v.min_dist >= cfg.clearance) {
      return PlanResult{curve, iterations, v.min_dist};
    }
    if (iterations >= cfg.max_iters) {
      throw PlanningFailed("plan_path: max_iters exhausted without meeting clearance");
    }

    Vec3 dir = perpendicular_part(v.sample - v.obstacle_center, axis);
    if (dir.norm() < 1e-12) {
      // Degenerate repulsion: push away from the table plane.
      dir = perpendicular_part(Vec3{0, 0, 1}, axis);
      if (dir.norm() < 1e-12) dir = perpendicular_part(Vec3{1, 0, 0}, axis);
    }
    dir = dir.normalized();

    curve.p1 = clamp_to_box(curve.p1 + cfg.step * dir, cfg.workspace);
    curve.p2 = clamp_to_box(curve.p2 + cfg.step * dir, cfg.workspace);
    ++iterations;
  }
}

CubicBezier straight_line_path(const Vec3& source, const Vec3& target) {
  if ((target - source).norm() == 0.0) {
    throw InvalidEndpoints("straight_line_path: source equals target");
  }
  CubicBezier curve;
  curve.p0 = source;
  curve.p1 = source + (target - source) * (1.0 / 3.0);
  curve.p2 = source + (target - source) * (2.0 / 3.0);
  curve.p3 = target;
  return curve;
}

double validate_curve(const CubicBezier& curve, const std::vector<Cuboid>& obstacles, int n) {
  if (n < 2) {
    throw std::domain_error("validate_curve: n must be >= 2");
  }
  double min_d = std::numeric_limits<double>::infinity();
  for (int i = 0; i < n; ++i) {
    const double t = static_cast<double>(i) / static_cast<double>(n - 1);
    const Vec3 pt = bezier_eval(curve, t);
    for (const auto& box : obstacles) {
      min_d = std::min(min_d, point_cuboid_distance(pt, box));
    }
  }
  return min_d;
}

}  // namespace appruss
