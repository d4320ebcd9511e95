#pragma once

#include <cstdint>
#include <vector>

#include "appruss/geometry.hpp"
#include "appruss/kinematics.hpp"

namespace appruss {

struct ExecutionConfig {
  int n_waypoints = 50;
  double speed = 0.1;                ///< meters/second along the commanded polyline
  double delay_max = 0.3;            ///< per-waypoint control delay, uniform [0, delay_max] s
  double jitter_sigma = 0.005;       ///< meters, per-axis Gaussian waypoint perturbation
  double collision_clearance = 0.0;  ///< meters, swept path must stay farther than this
  double pos_tol = 0.005;            ///< meters, target-reached tolerance
  int max_retries = 5;               ///< reactive baseline detour budget
};

enum class FailureReason { None, Collision, RangeOfMotion, TargetMiss, PerceptionFailure };

struct RunResult {
  bool success = false;
  double moving_time = 0.0;
  FailureReason failure_reason = FailureReason::None;
};

const char* to_string(FailureReason reason);

/// Commanded tool orientation held along every trajectory: probe pointing
/// straight down (tool +z mapped to world -z).
Quat probe_down_orientation();

/// Minimum obstacle distance over the polyline through `points`, with
/// `subsamples` checks per segment. +infinity when either list is trivial.
double polyline_min_clearance(const std::vector<Vec3>& points,
                              const std::vector<Cuboid>& obstacles, int subsamples);

/// Execute a planned curve open-loop: sample n_waypoints uniformly, jitter the
/// interior waypoints, solve IK per waypoint (seeded from the previous
/// solution), and check the swept polyline against the obstacles.
/// moving_time = sum(segment length / speed) + sum(delay per waypoint).
/// Failures are encoded in the RunResult, never thrown.
RunResult execute_trajectory(const CubicBezier& curve, const ArmModel& arm,
                             const std::vector<Cuboid>& obstacles, const ExecutionConfig& cfg,
                             std::uint64_t rng_seed);

/// Reactive straight-line mover used as the no-planning baseline. It senses
/// the segment to the next jittered waypoint before committing; on a
/// clearance violation it stops, backs off one waypoint, and retries with a
/// laterally offset detour in a seeded-random perpendicular direction. Each
/// sensing stop and each back-off costs a delay draw; exhausting max_retries
/// is a Collision failure.
RunResult execute_reactive_baseline(const Vec3& source, const Vec3& target, const ArmModel& arm,
                                    const std::vector<Cuboid>& obstacles,
                                    const ExecutionConfig& cfg, std::uint64_t rng_seed);

}  // namespace appruss
