#include "polyflex/quad_symmetry.hpp"

#include <algorithm>
#include <cmath>

namespace polyflex {

namespace {

void require_distinct(const Point3& a, const Point3& b, const Point3& a2, const Point3& b2,
                      double scale, const Tolerance& tol) {
  const Point3* p[4] = {&a, &b, &a2, &b2};
  if (!(scale > 0.0)) throw GeometryError("degenerate quadrilateral: coincident points");
  for (int i = 0; i < 4; ++i)
    for (int j = i + 1; j < 4; ++j)
      if ((*p[i] - *p[j]).norm() <= tol.eps_len * scale)
        throw GeometryError("degenerate quadrilateral: coincident points");
}

}  // namespace

double quad_scale(const Point3& a, const Point3& b, const Point3& a2, const Point3& b2) {
  return max_pairwise_distance({a, b, a2, b2});
}

bool has_rotational_lengths(const Point3& a, const Point3& b, const Point3& a2, const Point3& b2,
                            const Tolerance& tol) {
  const double s = quad_scale(a, b, a2, b2);
  return std::abs((a - b).norm() - (a2 - b2).norm()) <= tol.eps_len * s &&
         std::abs((a - b2).norm() - (a2 - b).norm()) <= tol.eps_len * s;
}

bool has_reflective_lengths(const Point3& a, const Point3& b, const Point3& a2, const Point3& b2,
                            const Tolerance& tol) {
  const double s = quad_scale(a, b, a2, b2);
  return std::abs((a - b).norm() - (a - b2).norm()) <= tol.eps_len * s &&
         std::abs((a2 - b).norm() - (a2 - b2).norm()) <= tol.eps_len * s;
}

Line3 symmetry_line(const Point3& a, const Point3& b, const Point3& a2, const Point3& b2,
                    const Tolerance& tol) {
  const double s = quad_scale(a, b, a2, b2);
  require_distinct(a, b, a2, b2, s, tol);
  if (!has_rotational_lengths(a, b, a2, b2, tol))
    throw GeometryError("not rotationally symmetric");

  const Point3 x = 0.5 * (a + a2);
  const Point3 y = 0.5 * (b + b2);
  Line3 line;
  if ((y - x).norm() > tol.eps_len * s) {
    line = Line3::through(x, y - x);
  } else {
    // Diagonals bisect each other: a parallelogram, turned about its normal.
    const Vec3 n = (a2 - a).cross(b2 - b);
    if (n.norm() <= tol.eps_len * s * s) throw GeometryError("degenerate quadrilateral");
    line = Line3::through(x, n);
  }

  const Isometry3 r = half_rotation(line);
  if ((r(a) - a2).norm() > tol.eps_len * s || (r(b) - b2).norm() > tol.eps_len * s)
    throw GeometryError("degenerate quadrilateral");
  return line;
}

Plane3 symmetry_plane(const Point3& a, const Point3& b, const Point3& a2, const Point3& b2,
                      const Tolerance& tol) {
  const double s = quad_scale(a, b, a2, b2);
  require_distinct(a, b, a2, b2, s, tol);
  if (!has_reflective_lengths(a, b, a2, b2, tol))
    throw GeometryError("not reflectionally symmetric");

  // a and a2 are equidistant from b and b2, so the bisector plane of bb2 is
  // the plane through a, a2 and the midpoint of bb2. In the planar kite case
  // it is also the plane through aa2 perpendicular to the kite.
  const Point3 m = 0.5 * (b + b2);
  const Plane3 plane = Plane3::from_point_normal(m, b2 - b);

  if (std::abs(plane.signed_distance(a)) > tol.eps_len * s ||
      std::abs(plane.signed_distance(a2)) > tol.eps_len * s)
    throw GeometryError("degenerate quadrilateral");
  return plane;
}

QuadSymmetryKind classify_quad(const Point3& a, const Point3& b, const Point3& a2, const Point3& b2,
                               const Tolerance& tol) {
  try {
    if (has_rotational_lengths(a, b, a2, b2, tol))
      return RotationalAboutLine{symmetry_line(a, b, a2, b2, tol)};
  } catch (const GeometryError&) {
  }
  try {
    if (has_reflective_lengths(a, b, a2, b2, tol))
      return ReflectiveInPlane{symmetry_plane(a, b, a2, b2, tol)};
  } catch (const GeometryError&) {
  }
  return NoSymmetry{};
}

}  // namespace polyflex
