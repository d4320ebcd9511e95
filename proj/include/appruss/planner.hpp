#pragma once

#include <vector>

#include "appruss/geometry.hpp"

namespace appruss {

struct PlannerConfig {
  double clearance = 0.05;  ///< min allowed path-to-obstacle distance, meters
  int n_check = 200;        ///< collision-check samples per candidate curve
  double step = 0.05;       ///< control-point repulsion increment, meters
  int max_iters = 100;
  Cuboid workspace{Vec3{0, 0, 0}, Vec3{10, 10, 10}};  ///< control points stay inside
};

struct PlanResult {
  CubicBezier curve;
  int iterations_used = 0;
  double min_clearance_achieved = 0.0;
};

/// Collision-free cubic Bezier from source to target.
///
/// p1/p2 start at the thirds of the straight segment and are pushed by `step`
/// along the repulsion direction (nearest obstacle center toward the deepest
/// violating sample, projected perpendicular to the source->target axis) until
/// all n_check samples clear every obstacle. Control points are clamped to the
/// workspace each iteration.
///
/// Throws InvalidEndpoints if source == target or either endpoint is closer
/// than `clearance` to an obstacle; PlanningFailed when max_iters runs out.
PlanResult plan_path(const Vec3& source, const Vec3& target, const std::vector<Cuboid>& obstacles,
                     const PlannerConfig& cfg);

/// Degenerate collinear curve tracing the straight segment (control points at
/// 0, 1/3, 2/3, 1). Throws InvalidEndpoints if source == target.
CubicBezier straight_line_path(const Vec3& source, const Vec3& target);

/// Minimum distance from any of n uniform curve samples to any obstacle.
/// Returns +infinity when the obstacle list is empty.
double validate_curve(const CubicBezier& curve, const std::vector<Cuboid>& obstacles, int n);

}  // namespace appruss
