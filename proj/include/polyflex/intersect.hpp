// Triangle/triangle predicates used by the self-intersection report.
#pragma once

#include <array>
#include <optional>
#include <utility>

#include "polyflex/geometry.hpp"

namespace polyflex {

using Triangle = std::array<Point3, 3>;

struct Segment3 {
  Point3 from;
  Point3 to;
  double length() const { return (to - from).norm(); }
};

/// Intersection of two closed triangles as a witness segment, or nullopt.
/// Contacts no longer than `slack` (an absolute length) are not reported,
/// so triangles that merely touch at a vertex or along a sliver do not count.
/// Coplanar triangles are reported when their overlap region has a diameter
/// above `slack`.
std::optional<Segment3> triangle_intersection(const Triangle& t1, const Triangle& t2, double slack);

double point_triangle_distance(const Point3& p, const Triangle& t);
double segment_segment_distance(const Point3& p0, const Point3& p1, const Point3& q0,
                                const Point3& q1);
/// 0 if they intersect.
double triangle_distance(const Triangle& t1, const Triangle& t2);

}  // namespace polyflex
