#include "appruss/kinematics.hpp"

#include <Eigen/Dense>
#include <Eigen/Geometry>
#include <algorithm>
#include <cmath>

#include "appruss/errors.hpp"

namespace appruss {

namespace {

constexpr double kDamping = 0.01;  // fixed Levenberg-style damping

Eigen::Matrix4d dh_transform(const DhRow& row, double theta) {
  const double th = theta + row.theta_offset;
  const double ct = std::cos(th), st = std::sin(th);
  const double ca = std::cos(row.alpha), sa = std::sin(row.alpha);
  Eigen::Matrix4d t;
  t << ct, -st * ca, st * sa, row.a * ct,  //
      st, ct * ca, -ct * sa, row.a * st,   //
      0.0, sa, ca, row.d,                  //
      0.0, 0.0, 0.0, 1.0;
  return t;
}

Eigen::Matrix4d base_transform(const Pose& base) {
  const Eigen::Quaterniond q(base.orientation.w, base.orientation.x, base.orientation.y,
                             base.orientation.z);
  Eigen::Matrix4d t = Eigen::Matrix4d::Identity();
  t.topLeftCorner<3, 3>() = q.normalized().toRotationMatrix();
  t.topRightCorner<3, 1>() = Eigen::Vector3d(base.position.x, base.position.y, base.position.z);
  return t;
}

/// Joint frames 0..6: frames[i] is the transform up to and including joint i.
std::array<Eigen::Matrix4d, kNumJoints + 1> chain_frames(const ArmModel& arm,
                                                         const JointConfig& q) {
  std::array<Eigen::Matrix4d, kNumJoints + 1> frames;
  frames[0] = base_transform(arm.base);
  for (int i = 0; i < kNumJoints; ++i) {
    frames[i + 1] = frames[i] * dh_transform(arm.dh[static_cast<std::size_t>(i)], q[i]);
  }
  return frames;
}

Pose pose_from_matrix(const Eigen::Matrix4d& t) {
  const Eigen::Quaterniond q(Eigen::Matrix3d(t.topLeftCorner<3, 3>()));
  Pose pose;
  pose.position = {t(0, 3), t(1, 3), t(2, 3)};
  pose.orientation = Quat{q.w(), q.x(), q.y(), q.z()}.normalized();
  return pose;
}

/// Orientation error as the axis-angle vector of R_target * R_current^T.
Eigen::Vector3d rotation_error(const Eigen::Matrix3d& current, const Eigen::Matrix3d& target) {
  const Eigen::AngleAxisd aa(target * current.transpose());
  return aa.angle() * aa.axis();
}

}  // namespace

ArmModel ur5e_arm(const Pose& base) {
  ArmModel arm;
  const double pi2 = M_PI / 2.0;
  arm.dh = {DhRow{0.0, 0.1625, pi2, 0.0},    DhRow{-0.425, 0.0, 0.0, 0.0},
            DhRow{-0.3922, 0.0, 0.0, 0.0},   DhRow{0.0, 0.1333, pi2, 0.0},
            DhRow{0.0, 0.0997, -pi2, 0.0},   DhRow{0.0, 0.0996, 0.0, 0.0}};
  for (auto& lim : arm.limits) lim = JointLimit{-2.0 * M_PI, 2.0 * M_PI};
  arm.base = base;
  return arm;
}

ArmModel arm_preset(const std::string& name, const Pose& base) {
  if (name == "ur5e") return ur5e_arm(base);
  throw ValidationError("arm.preset", "unknown preset '" + name + "'");
}

Pose forward_kinematics(const ArmModel& arm, const JointConfig& q) {
  return pose_from_matrix(chain_frames(arm, q).back());
}

bool within_limits(const ArmModel& arm, const JointConfig& q) {
  for (int i = 0; i < kNumJoints; ++i) {
    const auto& lim = arm.limits[static_cast<std::size_t>(i)];
    if (q[i] < lim.lo || q[i] > lim.hi) return false;
  }
  return true;
}

JointConfig inverse_kinematics(const ArmModel& arm, const Pose& target, const JointConfig& seed,
                               double tol_pos, double tol_rot, int max_iters) {
  if (tol_pos <= 0.0 || tol_rot <= 0.0) {
    throw std::domain_error("inverse_kinematics: tolerances must be > 0");
  }
  const Vec3 offset = target.position - arm.base.position;
  if (offset.norm() > arm.max_reach()) {
    throw Unreachable("inverse_kinematics: target beyond workspace radius");
  }

  const Eigen::Vector3d target_pos(target.position.x, target.position.y, target.position.z);
  const Eigen::Matrix3d target_rot =
      Eigen::Quaterniond(target.orientation.w, target.orientation.x, target.orientation.y,
                         target.orientation.z)
          .normalized()
          .toRotationMatrix();

  const auto clamp_config = [&arm](JointConfig cfg) {
    for (int i = 0; i < kNumJoints; ++i) {
      const auto& lim = arm.limits[static_cast<std::size_t>(i)];
      cfg[i] = std::clamp(cfg[i], lim.lo, lim.hi);
    }
    return cfg;
  };
  const auto pose_error = [&](const JointConfig& cfg, Eigen::Vector3d& pos_err,
                              Eigen::Vector3d& rot_err) {
    const Eigen::Matrix4d ee = chain_frames(arm, cfg).back();
    pos_err = target_pos - ee.topRightCorner<3, 1>();
    rot_err = rotation_error(ee.topLeftCorner<3, 3>(), target_rot);
    return std::sqrt(pos_err.squaredNorm() + rot_err.squaredNorm());
  };

  JointConfig q = clamp_config(seed);
  Eigen::Vector3d pos_err, rot_err;
  double err_norm = pose_error(q, pos_err, rot_err);

  for (int iter = 0; iter <= max_iters; ++iter) {
    if (pos_err.norm() < tol_pos && rot_err.norm() < tol_rot) {
      return q;
    }
    if (iter == max_iters) break;

    const auto frames = chain_frames(arm, q);
    const Eigen::Vector3d pos = frames.back().topRightCorner<3, 1>();
    // Geometric Jacobian for revolute joints: column i is
    // [z_{i-1} x (p_e - p_{i-1}); z_{i-1}].
    Eigen::Matrix<double, 6, kNumJoints> jac;
    for (int i = 0; i < kNumJoints; ++i) {
      const Eigen::Vector3d z = frames[static_cast<std::size_t>(i)].block<3, 1>(0, 2);
      const Eigen::Vector3d p = frames[static_cast<std::size_t>(i)].block<3, 1>(0, 3);
      jac.block<3, 1>(0, i) = z.cross(pos - p);
      jac.block<3, 1>(3, i) = z;
    }

    Eigen::Matrix<double, 6, 1> err;
    err << pos_err, rot_err;
    // Error-proportional damping (clamped): kDamping stabilizes large steps;
    // letting it shrink near convergence avoids stalling at wrist
    // singularities, where a fixed value throttles the terminal rate.
    const double lambda = std::clamp(err_norm, 1e-4, kDamping);
    const Eigen::Matrix<double, 6, 6> jjt =
        jac * jac.transpose() + lambda * lambda * Eigen::Matrix<double, 6, 6>::Identity();
    const Eigen::Matrix<double, kNumJoints, 1> dq = jac.transpose() * jjt.ldlt().solve(err);

    // Backtracking step control: halve the update until the error stops
    // increasing (accept the last trial if all halvings fail).
    double scale = 1.0;
    for (int halving = 0; halving < 8; ++halving) {
      JointConfig trial = q;
      for (int i = 0; i < kNumJoints; ++i) trial[i] += scale * dq(i);
      trial = clamp_config(trial);
      Eigen::Vector3d trial_pos_err, trial_rot_err;
      const double trial_norm = pose_error(trial, trial_pos_err, trial_rot_err);
      if (trial_norm <= err_norm || halving == 7) {
        q = trial;
        err_norm = trial_norm;
        pos_err = trial_pos_err;
        rot_err = trial_rot_err;
        break;
      }
      scale *= 0.5;
    }
  }
  throw NotConverged("inverse_kinematics: no solution within max_iters");
}

}  // namespace appruss
