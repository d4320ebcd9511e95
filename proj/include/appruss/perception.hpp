#pragma once

#include <cstdint>
#include <vector>

#include "appruss/geometry.hpp"

namespace appruss {

/// Fiducial marker: center pose with the surface normal along the frame's +z.
struct Marker {
  int id = 0;
  Pose true_pose;
};

struct NoiseModel {
  double sigma_pos = 0.002;    ///< meters, per-axis Gaussian
  double sigma_rot = 0.01;     ///< radians, small-angle axis-angle
  double detection_prob = 1.0;
};

struct Observation {
  int id = 0;
  Pose pose;
};

/// Noisy detections of the given markers. Each marker is detected
/// independently with detection_prob; missed detections are simply absent.
/// Deterministic given rng_seed.
std::vector<Observation> observe_markers(const std::vector<Marker>& markers,
                                         const NoiseModel& noise, std::uint64_t rng_seed);

/// Pose of the observation matching desired_id. Throws TargetNotFound.
Pose select_target(const std::vector<Observation>& observations, int desired_id);

/// Target position offset by `standoff` along the marker's +z normal.
Vec3 approach_point(const Pose& target, double standoff);

}  // namespace appruss
