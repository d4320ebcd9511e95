#include "appruss/sim.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "appruss/errors.hpp"
#include "appruss/rng.hpp"

namespace appruss {

namespace {

constexpr int kSegmentSubSamples = 20;
constexpr double kIkTolPos = 1e-4;    // meters
constexpr double kIkTolRot = 1e-3;    // radians
constexpr int kIkMaxIters = 200;
constexpr double kDetourStepFactor = 2.0;  // lateral detour step, in waypoint spacings

/// IK seed for the first waypoint; later waypoints reuse the previous
/// solution. Elbow-up tabletop configuration.
JointConfig neutral_config() {
  JointConfig q;
  q.q = {0.0, -M_PI / 2.0, M_PI / 2.0, -M_PI / 2.0, -M_PI / 2.0, 0.0};
  return q;
}

Vec3 jitter_vec(Rng& rng, double sigma) {
  const double a = rng.gaussian();
  const double b = rng.gaussian();
  const double c = rng.gaussian();
  return Vec3{a, b, c} * sigma;
}

double segment_min_clearance(const Vec3& a, const Vec3& b, const std::vector<Cuboid>& obstacles) {
  double min_d = std::numeric_limits<double>::infinity();
  for (const auto& box : obstacles) {
    min_d = std::min(min_d, segment_clearance(a, b, box, kSegmentSubSamples));
  }
  return min_d;
}

/// Orthonormal basis of the plane perpendicular to `axis`.
void perpendicular_basis(const Vec3& axis, Vec3& e1, Vec3& e2) {
  const Vec3 up = std::abs(axis.z) < 0.9 ? Vec3{0, 0, 1} : Vec3{1, 0, 0};
  e1 = axis.cross(up).normalized();
  e2 = axis.cross(e1).normalized();
}

}  // namespace

const char* to_string(FailureReason reason) {
  switch (reason) {
    case FailureReason::None: return "None";
    case FailureReason::Collision: return "Collision";
    case FailureReason::RangeOfMotion: return "RangeOfMotion";
    case FailureReason::TargetMiss: return "TargetMiss";
    case FailureReason::PerceptionFailure: return "PerceptionFailure";
  }
  return "Unknown";
}

Quat probe_down_orientation() { return Quat{0.0, 1.0, 0.0, 0.0}; }

double polyline_min_clearance(const std::vector<Vec3>& points,
                              const std::vector<Cuboid>& obstacles, int subsamples) {
  double min_d = std::numeric_limits<double>::infinity();
  for (std::size_t i = 1; i < points.size(); ++i) {
    for (const auto& box : obstacles) {
      min_d = std::min(min_d, segment_clearance(points[i - 1], points[i], box, subsamples));
    }
  }
  return min_d;
}

RunResult execute_trajectory(const CubicBezier& curve, const ArmModel& arm,
                             const std::vector<Cuboid>& obstacles, const ExecutionConfig& cfg,
                             std::uint64_t rng_seed) {
  if (cfg.n_waypoints < 2 || cfg.speed <= 0.0 || cfg.delay_max < 0.0 || cfg.jitter_sigma < 0.0 ||
      cfg.pos_tol < 0.0 || cfg.collision_clearance < 0.0) {
    throw std::domain_error("execute_trajectory: invalid execution configuration");
  }
  Rng rng(rng_seed);
  const int n = cfg.n_waypoints;
  const std::vector<Vec3> nominal = bezier_sample_uniform(curve, n);
  const Quat tool = probe_down_orientation();

  RunResult result;
  JointConfig q = neutral_config();
  try {
    q = inverse_kinematics(arm, Pose{nominal[0], tool}, q, kIkTolPos, kIkTolRot, kIkMaxIters);
  } catch (const Error&) {
    result.failure_reason = FailureReason::RangeOfMotion;
    return result;
  }

  Vec3 pos = nominal[0];
  for (int k = 1; k < n; ++k) {
    // The final waypoint is commanded exactly: the controller servoes onto the
    // target instead of executing one more noisy step.
    Vec3 cmd = nominal[static_cast<std::size_t>(k)];
    if (k < n - 1) cmd += jitter_vec(rng, cfg.jitter_sigma);
    const double delay = rng.uniform(0.0, cfg.delay_max);

    try {
      q = inverse_kinematics(arm, Pose{cmd, tool}, q, kIkTolPos, kIkTolRot, kIkMaxIters);
    } catch (const Error&) {
      result.failure_reason = FailureReason::RangeOfMotion;
      return result;
    }

    result.moving_time += (cmd - pos).norm() / cfg.speed + delay;
    if (segment_min_clearance(pos, cmd, obstacles) <= cfg.collision_clearance) {
      result.failure_reason = FailureReason::Collision;
      return result;
    }
    pos = cmd;
  }

  const Vec3 reached = forward_kinematics(arm, q).position;
  if ((reached - curve.p3).norm() > cfg.pos_tol) {
    result.failure_reason = FailureReason::TargetMiss;
    return result;
  }
  result.success = true;
  return result;
}

RunResult execute_reactive_baseline(const Vec3& source, const Vec3& target, const ArmModel& arm,
                                    const std::vector<Cuboid>& obstacles,
                                    const ExecutionConfig& cfg, std::uint64_t rng_seed) {
  if (cfg.n_waypoints < 2 || cfg.speed <= 0.0 || cfg.delay_max < 0.0 || cfg.jitter_sigma < 0.0 ||
      cfg.pos_tol < 0.0 || cfg.collision_clearance < 0.0 || cfg.max_retries < 0) {
    throw std::domain_error("execute_reactive_baseline: invalid execution configuration");
  }
  if ((target - source).norm() == 0.0) {
    throw std::domain_error("execute_reactive_baseline: source equals target");
  }
  Rng rng(rng_seed);
  const int n = cfg.n_waypoints;
  const Vec3 axis = (target - source).normalized();
  const double spacing = (target - source).norm() / static_cast<double>(n - 1);
  Vec3 e1, e2;
  perpendicular_basis(axis, e1, e2);

  std::vector<Vec3> nominal(static_cast<std::size_t>(n));
  for (int k = 0; k < n; ++k) {
    nominal[static_cast<std::size_t>(k)] =
        source + (target - source) * (static_cast<double>(k) / static_cast<double>(n - 1));
  }
  // Detour shifts fade out over the last fifth of the line so the mover still
  // converges onto the target.
  const double taper_span = std::max(1.0, 0.2 * static_cast<double>(n - 1));
  const auto taper = [&](int k) {
    return std::min(1.0, static_cast<double>(n - 1 - k) / taper_span);
  };

  RunResult result;
  const Quat tool = probe_down_orientation();
  JointConfig q = neutral_config();
  try {
    q = inverse_kinematics(arm, Pose{source, tool}, q, kIkTolPos, kIkTolRot, kIkMaxIters);
  } catch (const Error&) {
    result.failure_reason = FailureReason::RangeOfMotion;
    return result;
  }

  std::vector<Vec3> visited(static_cast<std::size_t>(n));
  visited[0] = source;
  Vec3 pos = source;
  Vec3 shift{0, 0, 0};
  int i = 0;
  int retries = 0;

  while (i < n - 1) {
    const int next = i + 1;
    Vec3 cmd = nominal[static_cast<std::size_t>(next)] + shift * taper(next);
    if (next < n - 1) cmd += jitter_vec(rng, cfg.jitter_sigma);

    if (segment_min_clearance(pos, cmd, obstacles) <= cfg.collision_clearance) {
      // Blocked: stop, back off one waypoint, and try a shifted line.
      ++retries;
      if (retries > cfg.max_retries) {
        result.failure_reason = FailureReason::Collision;
        return result;
      }
      const double backoff_delay = rng.uniform(0.0, cfg.delay_max);
      if (i > 0) {
        const Vec3 back = visited[static_cast<std::size_t>(i - 1)];
        result.moving_time += (pos - back).norm() / cfg.speed + backoff_delay;
        pos = back;
        --i;
      } else {
        result.moving_time += backoff_delay;
      }
      const double phi = rng.uniform(0.0, 2.0 * M_PI);
      shift = (std::cos(phi) * e1 + std::sin(phi) * e2) *
              (kDetourStepFactor * spacing * static_cast<double>(retries));
      continue;
    }

    // Reactive sensing: the mover halts at each waypoint to re-check the path
    // ahead before committing, costing one extra control delay.
    const double move_delay = rng.uniform(0.0, cfg.delay_max);
    const double sense_delay = rng.uniform(0.0, cfg.delay_max);
    try {
      q = inverse_kinematics(arm, Pose{cmd, tool}, q, kIkTolPos, kIkTolRot, kIkMaxIters);
    } catch (const Error&) {
      result.failure_reason = FailureReason::RangeOfMotion;
      return result;
    }
    result.moving_time += (cmd - pos).norm() / cfg.speed + move_delay + sense_delay;
    pos = cmd;
    visited[static_cast<std::size_t>(next)] = cmd;
    i = next;
  }

  const Vec3 reached = forward_kinematics(arm, q).position;
  if ((reached - target).norm() > cfg.pos_tol) {
    result.failure_reason = FailureReason::TargetMiss;
    return result;
  }
  result.success = true;
  return result;
}

}  // namespace appruss
