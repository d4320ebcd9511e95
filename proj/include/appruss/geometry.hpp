#pragma once

#include <cmath>
#include <vector>

namespace appruss {

struct Vec3 {
  double x = 0.0;
  double y = 0.0;
  double z = 0.0;

  Vec3() = default;
  Vec3(double x, double y, double z) : x(x), y(y), z(z) {}

  Vec3 operator+(const Vec3& o) const { return {x + o.x, y + o.y, z + o.z}; }
  Vec3 operator-(const Vec3& o) const { return {x - o.x, y - o.y, z - o.z}; }
  Vec3 operator*(double s) const { return {x * s, y * s, z * s}; }
  Vec3 operator/(double s) const { return {x / s, y / s, z / s}; }
  Vec3& operator+=(const Vec3& o) {
    x += o.x;
    y += o.y;
    z += o.z;
    return *this;
  }
  Vec3 operator-() const { return {-x, -y, -z}; }
  bool operator==(const Vec3& o) const { return x == o.x && y == o.y && z == o.z; }

  double dot(const Vec3& o) const { return x * o.x + y * o.y + z * o.z; }
  Vec3 cross(const Vec3& o) const {
    return {y * o.z - z * o.y, z * o.x - x * o.z, x * o.y - y * o.x};
  }
  double norm() const { return std::sqrt(dot(*this)); }
  Vec3 normalized() const {
    const double n = norm();
    return n > 0.0 ? *this / n : Vec3{0, 0, 0};
  }
  bool finite() const { return std::isfinite(x) && std::isfinite(y) && std::isfinite(z); }
};

inline Vec3 operator*(double s, const Vec3& v) { return v * s; }

/// Unit quaternion, scalar-first (w, x, y, z).
struct Quat {
  double w = 1.0;
  double x = 0.0;
  double y = 0.0;
  double z = 0.0;

  Quat() = default;
  Quat(double w, double x, double y, double z) : w(w), x(x), y(y), z(z) {}

  static Quat identity() { return {1, 0, 0, 0}; }

  static Quat from_axis_angle(const Vec3& axis, double angle) {
    const Vec3 a = axis.normalized();
    const double h = 0.5 * angle;
    const double s = std::sin(h);
    return {std::cos(h), a.x * s, a.y * s, a.z * s};
  }

  Quat operator*(const Quat& o) const {
    return {w * o.w - x * o.x - y * o.y - z * o.z, w * o.x + x * o.w + y * o.z - z * o.y,
            w * o.y - x * o.z + y * o.w + z * o.x, w * o.z + x * o.y - y * o.x + z * o.w};
  }

  Quat conjugate() const { return {w, -x, -y, -z}; }

  double norm() const { return std::sqrt(w * w + x * x + y * y + z * z); }

  Quat normalized() const {
    const double n = norm();
    return {w / n, x / n, y / n, z / n};
  }

  /// Rotate a vector by this quaternion (assumed unit norm).
  Vec3 rotate(const Vec3& v) const {
    const Vec3 u{x, y, z};
    const Vec3 t = 2.0 * u.cross(v);
    return v + w * t + u.cross(t);
  }

  bool operator==(const Quat& o) const {
    return w == o.w && x == o.x && y == o.y && z == o.z;
  }
};

/// Angle of the relative rotation between two unit quaternions, in [0, pi].
inline double quat_angle(const Quat& a, const Quat& b) {
  double d = std::abs(a.w * b.w + a.x * b.x + a.y * b.y + a.z * b.z);
  if (d > 1.0) d = 1.0;
  return 2.0 * std::acos(d);
}

/// Rigid-body pose: position in meters plus a unit orientation quaternion.
struct Pose {
  Vec3 position;
  Quat orientation;

  Pose() = default;
  Pose(const Vec3& p, const Quat& q) : position(p), orientation(q) {}
};

/// Cubic Bezier curve defined by four control points. p0 is the path source,
/// p3 the path target; the curve interpolates both and stays inside the
/// control-point convex hull.
struct CubicBezier {
  Vec3 p0, p1, p2, p3;
};

/// Axis-aligned box obstacle. half_extents must be strictly positive.
struct Cuboid {
  Vec3 center;
  Vec3 half_extents;
};

/// Evaluate the curve at parameter t in [0, 1] (Bernstein form).
/// Throws std::domain_error for t outside [0, 1].
Vec3 bezier_eval(const CubicBezier& curve, double t);

/// n points at parameters i/(n-1), i = 0..n-1. First equals p0, last p3.
/// Throws std::domain_error for n < 2.
std::vector<Vec3> bezier_sample_uniform(const CubicBezier& curve, int n);

/// Chordal arc-length approximation over n uniform samples.
double arc_length(const CubicBezier& curve, int n = 1000);

/// Euclidean distance from p to the closest point of the box. Zero iff p is
/// inside or on the boundary.
double point_cuboid_distance(const Vec3& p, const Cuboid& box);

/// Minimum point_cuboid_distance over n uniform samples of segment ab.
double segment_clearance(const Vec3& a, const Vec3& b, const Cuboid& box, int n);

}  // namespace appruss
