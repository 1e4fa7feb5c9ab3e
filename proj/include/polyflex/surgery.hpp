// Cutting a realized surface along a closed quadrilateral of edges and
// regluing one side after a half-rotation or a reflection.
#pragma once

#include <array>
#include <map>
#include <optional>
#include <variant>

#include "polyflex/mesh.hpp"

namespace polyflex {

struct ExistingVertex {
  Label label;
};

/// The point from + t (to - from) on an existing edge; it becomes a new vertex.
struct PointOnEdge {
  Label from;
  Label to;
  double t = 0.5;
  Label new_label;
};

using QuadAnchor = std::variant<ExistingVertex, PointOnEdge>;

/// q0 q1 q2 q3, in cyclic order along the surface.
struct SurfaceQuad {
  std::array<QuadAnchor, 4> anchors;
};

/// Inserts `new_label` at from + t (to - from), splitting both faces on the edge.
Realization split_edge(const Realization& r, const Label& from, const Label& to, double t,
                       const Label& new_label);

/// One side of a cut: an open surface bounded by the quad.
struct Cap {
  TriMesh mesh;
  Configuration config;
  std::array<Label, 4> boundary;

  std::vector<Label> interior() const;
};

struct CutResult {
  Realization surface;  // after inserting PointOnEdge anchors
  std::array<Label, 4> quad;
  std::array<Cap, 2> caps;  // caps[0] holds the lowest-numbered face
};

/// Throws GeometryError for repeated anchors, for quad sides that are not
/// edges ("quad side not co-facial") and if the cut does not split the
/// surface into exactly two pieces.
CutResult cut_along_quad(const Realization& r, const SurfaceQuad& quad);

/// Joins two caps along a common boundary. Throws if the boundary lengths
/// differ ("caps incompatible"), the boundary points do not coincide, the
/// orientations clash, or the interiors share a label.
Realization glue(const Cap& a, const Cap& b, const Tolerance& tol = {});

struct SurgeryOptions {
  /// Move the cap whose interior holds this vertex. Default: the cap with
  /// fewer faces (ties: caps[1]).
  std::optional<Label> moving_vertex;
  /// New names for moved interior vertices; unlisted ones get a prime.
  std::map<Label, Label> rename;
};

/// Quad with |q0q1| = |q2q3| and |q1q2| = |q3q0|: turn one cap by the
/// half-rotation swapping q0 <-> q2, q1 <-> q3.
Realization cut_and_twist(const Realization& r, const SurfaceQuad& quad,
                          const SurgeryOptions& opt = {}, const Tolerance& tol = {});

/// Quad with one diagonal pair equidistant from the other pair: mirror one
/// cap in the plane through the equidistant pair.
Realization cut_and_reflect(const Realization& r, const SurfaceQuad& quad,
                            const SurgeryOptions& opt = {}, const Tolerance& tol = {});

}  // namespace polyflex
