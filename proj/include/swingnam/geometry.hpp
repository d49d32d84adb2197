#pragma once

#include <Eigen/Core>

#include <algorithm>
#include <cmath>
#include <numbers>

#include "swingnam/error.hpp"

// 2-D primitives over image-convention points (+x right, +y down). Angles are
// returned in degrees.
namespace swingnam::geometry {

template <typename Scalar>
using Point2 = Eigen::Matrix<Scalar, 2, 1>;

using Point2d = Point2<double>;

template <typename Scalar>
constexpr Scalar rad_to_deg(Scalar radians) {
  return radians * Scalar(180) / std::numbers::pi_v<Scalar>;
}

template <typename Scalar>
Point2<Scalar> midpoint(const Point2<Scalar>& p, const Point2<Scalar>& q) {
  return (p + q) / Scalar(2);
}

template <typename Scalar>
Scalar distance(const Point2<Scalar>& p, const Point2<Scalar>& q) {
  return (p - q).norm();
}

// Interior angle at `vertex` between rays vertex->a and vertex->c, in [0, 180].
template <typename Scalar>
Scalar vertex_angle(const Point2<Scalar>& a, const Point2<Scalar>& vertex, const Point2<Scalar>& c) {
  const Point2<Scalar> u = a - vertex;
  const Point2<Scalar> v = c - vertex;
  if (u.squaredNorm() == Scalar(0) || v.squaredNorm() == Scalar(0)) {
    throw Error(ErrorCode::DegenerateAngle, "zero-length ray at angle vertex");
  }
  const Scalar dot = u.x() * v.x() + u.y() * v.y();
  const Scalar cross = std::abs(u.x() * v.y() - u.y() * v.x());
  return rad_to_deg(std::atan2(cross, dot));
}

// Inclination of the line through p and q against the horizontal, in (-90, 90].
// Measured in real-world orientation (y up): positive when the line rises
// toward +x, the target side for a right-handed face-on golfer. With the lead
// (left) joint first this reads "positive when the lead joint is higher".
// The result does not depend on argument order. A vertical line reports 90.
template <typename Scalar>
Scalar angle_from_horizontal(const Point2<Scalar>& p, const Point2<Scalar>& q) {
  const Scalar run = p.x() - q.x();
  const Scalar rise = q.y() - p.y();
  if (run == Scalar(0) && rise == Scalar(0)) {
    throw Error(ErrorCode::DegenerateSegment, "coincident endpoints");
  }
  if (run == Scalar(0)) return Scalar(90);
  return rad_to_deg(std::atan(rise / run));
}

// Lean of the line through p and q away from the vertical, in (-90, 90].
// Positive when the upper endpoint (smaller y) sits toward +x. A horizontal
// line reports 90.
template <typename Scalar>
Scalar angle_from_vertical(const Point2<Scalar>& p, const Point2<Scalar>& q) {
  const Scalar drop = q.y() - p.y();
  const Scalar shift = p.x() - q.x();
  if (drop == Scalar(0) && shift == Scalar(0)) {
    throw Error(ErrorCode::DegenerateSegment, "coincident endpoints");
  }
  if (drop == Scalar(0)) return Scalar(90);
  // shift / drop is unchanged by swapping the endpoints, so this is the
  // offset of the upper endpoint over the vertical extent either way.
  return rad_to_deg(std::atan(shift / drop));
}

}  // namespace swingnam::geometry
