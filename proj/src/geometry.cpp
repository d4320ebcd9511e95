#include "appruss/geometry.hpp"

#include <algorithm>
#include <limits>
#include <stdexcept>

namespace appruss {

Vec3 bezier_eval(const CubicBezier& curve, double t) {
  if (!(t >= 0.0 && t <= 1.0)) {
    throw std::domain_error("bezier_eval: t must be in [0, 1]");
  }
  const double u = 1.0 - t;
  const double b0 = u * u * u;
  const double b1 = 3.0 * u * u * t;
  const double b2 = 3.0 * u * t * t;
  const double b3 = t * t * t;
  return b0 * curve.p0 + b1 * curve.p1 + b2 * curve.p2 + b3 * curve.p3;
}

std::vector<Vec3> bezier_sample_uniform(const CubicBezier& curve, int n) {
  if (n < 2) {
    throw std::domain_error("bezier_sample_uniform: n must be >= 2");
  }
  std::vector<Vec3> pts;
  pts.reserve(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) {
    const double t = static_cast<double>(i) / static_cast<double>(n - 1);
    pts.push_back(bezier_eval(curve, t));
  }
  return pts;
}

double arc_length(const CubicBezier& curve, int n) {
  const std::vector<Vec3> pts = bezier_sample_uniform(curve, n);
  double length = 0.0;
  for (std::size_t i = 1; i < pts.size(); ++i) {
    length += (pts[i] - pts[i - 1]).norm();
  }
  return length;
}

double point_cuboid_distance(const Vec3& p, const Cuboid& box) {
  const Vec3 lo = box.center - box.half_extents;
  const Vec3 hi = box.center + box.half_extents;
  const double dx = std::max({lo.x - p.x, 0.0, p.x - hi.x});
  const double dy = std::max({lo.y - p.y, 0.0, p.y - hi.y});
  const double dz = std::max({lo.z - p.z, 0.0, p.z - hi.z});
  return std::sqrt(dx * dx + dy * dy + dz * dz);
}

double segment_clearance(const Vec3& a, const Vec3& b, const Cuboid& box, int n) {
  if (n < 2) {
    throw std::domain_error("segment_clearance: n must be >= 2");
  }
  double min_d = std::numeric_limits<double>::infinity();
  for (int i = 0; i < n; ++i) {
    const double t = static_cast<double>(i) / static_cast<double>(n - 1);
    min_d = std::min(min_d, point_cuboid_distance(a + t * (b - a), box));
  }
  return min_d;
}

}  // namespace appruss
