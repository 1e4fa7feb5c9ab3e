// Builders for the flexible octahedra, the reflected decahedron, the tented
// dodecahedron on eight vertices and the twisted pentagonal bipyramid.
//
// Octahedron labels: equator A, B, A', B' (in that cyclic order), apices C
// and C'. The half-rotation about the z-axis swaps A <-> A', B <-> B' and
// C <-> C'. Edge lengths:
//   AB = A'B' = l2, A'B = AB' = l1, CA = C'A' = l5, CA' = C'A = l3 + l4,
//   CB = C'B' = y, CB' = C'B = x.
#pragma once

#include <array>
#include <optional>
#include <string>

#include "polyflex/flex.hpp"
#include "polyflex/mesh.hpp"

namespace polyflex {

/// A failure tagged with the build stage it happened in.
class StageError : public GeometryError {
 public:
  StageError(std::string stage, const std::string& message)
      : GeometryError(stage + ": " + message), stage_(std::move(stage)), message_(message) {}
  const std::string& stage() const { return stage_; }
  const std::string& message() const { return message_; }

 private:
  std::string stage_;
  std::string message_;
};

struct DodecParams {
  double l1 = 3.6, l2 = 3.9, l3 = 1.0, l4 = 3.9, l5 = 2.9;
  double h1 = 6.5, h2 = 6.5, h3 = 6.1;
  std::optional<double> base_shape;  // |AA'|; unset means "pick the reference"

  static DodecParams defaults() { return {}; }
  /// The alternative set with a larger range of motion.
  static DodecParams wide_range() { return {4.2, 4.3, 1.0, 4.8, 3.05, 7.9, 4.0, 6.4, std::nullopt}; }
};

struct DerivedLengths {
  double x = 0.0;  // BC' = B'C
  double y = 0.0;  // B'C' = BC
};

/// Law of cosines in the triangles through A. Throws StageError("derive_xy",
/// "infeasible lengths") when a radicand is negative or a triangle fails.
DerivedLengths derive_xy(const DodecParams& p);

/// Lengths of a type I octahedron with the pattern above.
struct Bricard1Lengths {
  double ab = 0.0;   // AB = A'B'
  double a2b = 0.0;  // A'B = AB'
  double ca = 0.0, cb = 0.0, ca2 = 0.0, cb2 = 0.0;  // from C to A, B, A', B'
};

Bricard1Lengths bricard1_lengths(const DodecParams& p);

/// Labels used for the six octahedron vertices, in the order A, B, A', B', C, C'.
using OctaLabels = std::array<Label, 6>;
inline const OctaLabels kOctaLabels = {"A", "B", "A'", "B'", "C", "C'"};

/// Faces (C, b, a) and (C', a, b) for consecutive equator vertices (a, b).
TriMesh octahedron_mesh(const OctaLabels& labels = kOctaLabels);

/// base_shape = |AA'|. With A = (r, 0, 0) and A' = (-r, 0, 0) the remaining
/// freedom of the equator is solved for |CB'| = cb2, taking C below the
/// plane of A, B, A' and the largest admissible |B| root. Throws
/// GeometryError("base shape infeasible") when no apex exists.
Realization build_bricard1(const Bricard1Lengths& len, double base_shape,
                           const OctaLabels& labels = kOctaLabels, const Tolerance& tol = {});

/// Longest run of feasible base_shape values on a uniform scan.
std::optional<std::pair<double, double>> bricard1_base_interval(const Bricard1Lengths& len,
                                                                int grid = 240);

/// Uses derive_xy; an unset base_shape means the middle of bricard1_base_interval.
Realization build_bricard1(const DodecParams& p, const Tolerance& tol = {});

/// Kite-based octahedron: AB = AB' = ab, A'B = A'B' = a2b; apex C at the
/// given distances and C' its mirror image in the plane through A, A'.
struct Bricard2Lengths {
  double ab = 0.0, a2b = 0.0;
  double ca = 0.0, cb = 0.0, ca2 = 0.0, cb2 = 0.0;
};

/// base_shape = |AA'|. Throws GeometryError("base shape infeasible").
Realization build_bricard2(const Bricard2Lengths& len, double base_shape,
                           const Tolerance& tol = {});

/// Splits AC' at |AD| = l3 and checks |DB| = l1, |DB'| = l2.
/// Throws GeometryError("construction inconsistent") when the checks fail.
Realization locate_D(const Realization& octa, const DodecParams& p, const Tolerance& tol = {});

/// Cut along D B' A' B and mirror the C' cone; C' becomes C''.
Realization cut_reflect_to_decahedron(const Realization& octa_with_d, const Tolerance& tol = {});

/// The 15 target lengths of the decahedron.
EdgeLengthTable decahedron_lengths(const DodecParams& p);

/// Face present in every intersecting pair. Throws GeometryError("single
/// tent insufficient") when there is none or it is not unique, and when the
/// surface has no intersections at all.
Face select_tent_face(const TriMesh& mesh, const Configuration& config, const Tolerance& tol = {});

/// Replaces `face` by three triangles over a new apex at distances h[i]
/// from face[i]. Prefers the apex on the outward side; falls back to the
/// other one if the outward choice intersects the surface.
Realization erect_tent(const Realization& r, const Face& face, const std::array<double, 3>& h,
                       const Label& apex = "T", const Tolerance& tol = {});

/// h1, h2 go to the ends of the face's y-edge (h1 at the B or B' end),
/// h3 to the remaining vertex. Throws if the face has no y-edge.
std::array<double, 3> tent_heights(const Face& face, const DodecParams& p);

struct BuildOptions {
  /// Distances from the tent apex in face order; overrides tent_heights.
  std::optional<std::array<double, 3>> tent_heights;
  int scan_grid = 240;
  StepControl reference_step{0.02, 0.04, 1e-6, 0.02, 400, 12, 1e-3, true};
};

struct DodecBuild {
  Realization octahedron;
  Realization decahedron;
  Realization dodecahedron;
  Face tent_face;
  std::array<double, 3> tent_heights{};
  double base_shape = 0.0;
  DerivedLengths xy;
  double tent_volume = 0.0;
};

/// The full pipeline. Stage tags: derive_xy, bricard1, locate_D, decahedron,
/// tent_face, tent, reference.
DodecBuild build_dodecahedron(const DodecParams& p, const BuildOptions& opt = {},
                              const Tolerance& tol = {});

/// Driving coordinate used for the dodecahedron's range of motion.
DrivingSelector dodecahedron_driving();

/// Parameters of the twisted variant. Base p1 pT p3 pB with |p1pT| = |p3pB| =
/// a and |pTp3| = |pBp1| = b, apex p2 at distances c1, cT, c3 from p1, pT,
/// p3; its distance to pB is sqrt(a^2 - b^2 + cT^2), which puts the
/// extension point p5 at equal distances from pT and pB. Requires b > cT.
struct Min8Params {
  double a = 2.8, b = 3.0, c1 = 2.5, cT = 2.2, c3 = 3.2;
  std::optional<double> base_shape;
};

struct Min8Build {
  Realization octahedron;  // p1 pT p3 pB, apices p2 and p0
  Realization extended;    // p0 moved onto the cone over p5 pT p3 pB
  Realization bipyramid;   // after the twist; p0 becomes p4
  Point3 p5 = Point3::Zero();
};

/// Throws GeometryError("no extension point") when p5 does not lie beyond p0.
Min8Build build_min8_twist(const Min8Params& p, const Tolerance& tol = {});

}  // namespace polyflex
