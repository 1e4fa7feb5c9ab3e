// Symmetry line / plane of a (possibly skew) quadrilateral ABA'B'.
//
// Opposite sides equal (AB = A'B', AB' = A'B) gives a line l such that a
// half-rotation about l swaps A <-> A' and B <-> B'. Adjacent pairs equal
// (AB = AB', A'B = A'B') gives a plane through A and A' whose reflection
// swaps B <-> B'. Both hold for every flexed position of such a quad, which
// is what the surgery in surgery.hpp relies on.
#pragma once

#include <variant>

#include "polyflex/geometry.hpp"

namespace polyflex {

struct RotationalAboutLine {
  Line3 line;
};
struct ReflectiveInPlane {
  Plane3 plane;
};
struct NoSymmetry {};

using QuadSymmetryKind = std::variant<RotationalAboutLine, ReflectiveInPlane, NoSymmetry>;

/// Max pairwise distance among the four points; every tolerance in this
/// module is relative to it.
double quad_scale(const Point3& a, const Point3& b, const Point3& a2, const Point3& b2);

bool has_rotational_lengths(const Point3& a, const Point3& b, const Point3& a2, const Point3& b2,
                            const Tolerance& tol = {});
bool has_reflective_lengths(const Point3& a, const Point3& b, const Point3& a2, const Point3& b2,
                            const Tolerance& tol = {});

/// Axis of the half-rotation swapping a <-> a2 and b <-> b2.
/// Throws GeometryError("not rotationally symmetric") when opposite sides differ.
Line3 symmetry_line(const Point3& a, const Point3& b, const Point3& a2, const Point3& b2,
                    const Tolerance& tol = {});

/// Plane through a and a2 whose reflection swaps b <-> b2.
Plane3 symmetry_plane(const Point3& a, const Point3& b, const Point3& a2, const Point3& b2,
                      const Tolerance& tol = {});

/// Rotational wins when both patterns hold.
QuadSymmetryKind classify_quad(const Point3& a, const Point3& b, const Point3& a2, const Point3& b2,
                               const Tolerance& tol = {});

}  // namespace polyflex
