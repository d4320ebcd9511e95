#include "appruss/perception.hpp"

#include <stdexcept>
#include <string>

#include "appruss/errors.hpp"
#include "appruss/rng.hpp"

namespace appruss {

std::vector<Observation> observe_markers(const std::vector<Marker>& markers,
                                         const NoiseModel& noise, std::uint64_t rng_seed) {
  if (noise.sigma_pos < 0.0 || noise.sigma_rot < 0.0 || noise.detection_prob < 0.0 ||
      noise.detection_prob > 1.0) {
    throw std::domain_error("observe_markers: invalid noise model");
  }
  Rng rng(rng_seed);
  std::vector<Observation> out;
  out.reserve(markers.size());
  for (const auto& marker : markers) {
    if (!rng.bernoulli(noise.detection_prob)) continue;

    Observation obs;
    obs.id = marker.id;
    obs.pose.position = marker.true_pose.position +
                        Vec3{rng.gaussian(0.0, noise.sigma_pos), rng.gaussian(0.0, noise.sigma_pos),
                             rng.gaussian(0.0, noise.sigma_pos)};
    if (noise.sigma_rot > 0.0) {
      // Small-angle perturbation about a uniformly random axis.
      Vec3 axis{rng.gaussian(), rng.gaussian(), rng.gaussian()};
      if (axis.norm() < 1e-12) axis = Vec3{0, 0, 1};
      const double angle = rng.gaussian(0.0, noise.sigma_rot);
      obs.pose.orientation =
          (Quat::from_axis_angle(axis, angle) * marker.true_pose.orientation).normalized();
    } else {
      obs.pose.orientation = marker.true_pose.orientation;
    }
    out.push_back(obs);
  }
  return out;
}

Pose select_target(const std::vector<Observation>& observations, int desired_id) {
  for (const auto& obs : observations) {
    if (obs.id == desired_id) return obs.pose;
  }
  throw TargetNotFound("select_target: no observation with id " + std::to_string(desired_id));
}

Vec3 approach_point(const Pose& target, double standoff) {
  if (standoff < 0.0) {
    throw std::domain_error("approach_point: standoff must be >= 0");
  }
  return target.position + standoff * target.orientation.rotate(Vec3{0, 0, 1});
}

}  // namespace appruss
