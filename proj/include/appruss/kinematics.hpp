#pragma once

#include <array>
#include <string>

#include "appruss/geometry.hpp"

namespace appruss {

/// One Denavit-Hartenberg row (classic convention): the joint transform is
/// Rz(theta + theta_offset) * Tz(d) * Tx(a) * Rx(alpha).
struct DhRow {
  double a = 0.0;             ///< link length, meters
  double d = 0.0;             ///< link offset, meters
  double alpha = 0.0;         ///< link twist, radians
  double theta_offset = 0.0;  ///< joint variable offset, radians
};

struct JointLimit {
  double lo = 0.0;
  double hi = 0.0;
};

inline constexpr int kNumJoints = 6;

/// 6-DoF serial arm: DH chain, joint limits, and the base pose the chain is
/// rooted at. Immutable after construction.
struct ArmModel {
  std::array<DhRow, kNumJoints> dh;
  std::array<JointLimit, kNumJoints> limits;
  Pose base;

  /// Upper bound on the distance from the base origin to any reachable
  /// end-effector position.
  double max_reach() const {
    double r = 0.0;
    for (const auto& row : dh) r += std::abs(row.a) + std::abs(row.d);
    return r;
  }
};

struct JointConfig {
  std::array<double, kNumJoints> q{};

  double& operator[](int i) { return q[static_cast<std::size_t>(i)]; }
  double operator[](int i) const { return q[static_cast<std::size_t>(i)]; }
  bool operator==(const JointConfig& o) const { return q == o.q; }
};

/// UR5e constants published by the manufacturer, joint limits +-2*pi.
ArmModel ur5e_arm(const Pose& base = Pose{});

/// Build an arm preset by name ("ur5e"). Throws ValidationError for unknown
/// names.
ArmModel arm_preset(const std::string& name, const Pose& base = Pose{});

/// End-effector pose from composing the per-joint transforms in order.
Pose forward_kinematics(const ArmModel& arm, const JointConfig& q);

/// True iff every joint angle lies in its closed [lo, hi] interval.
bool within_limits(const ArmModel& arm, const JointConfig& q);

/// Damped-least-squares IK with per-step joint-limit clamping.
///
/// Returns a config whose FK matches `target` within the tolerances and which
/// satisfies within_limits. Throws Unreachable if the target position lies
/// beyond the workspace radius, NotConverged if max_iters runs out.
JointConfig inverse_kinematics(const ArmModel& arm, const Pose& target, const JointConfig& seed,
                               double tol_pos, double tol_rot, int max_iters);

}  // namespace appruss
