// Small sphere triangulations: enumeration up to isomorphism, degree-3
// reduction and the classes that can carry a flex.
#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "polyflex/mesh.hpp"

namespace polyflex {

/// Combinatorial triangulation of the sphere stored as a rotation system:
/// rot[v] lists the neighbors of v in counterclockwise order, so every face
/// (a, b, c) has c right after b in rot[a].
class PlanarTriangulation {
 public:
  PlanarTriangulation() = default;
  explicit PlanarTriangulation(std::vector<std::vector<int>> rot);

  static PlanarTriangulation tetrahedron();
  static PlanarTriangulation octahedron();
  static PlanarTriangulation pentagonal_bipyramid();
  /// From consistently oriented faces on vertices 0..n-1.
  static PlanarTriangulation from_faces(int n, const std::vector<std::array<int, 3>>& faces);

  int vertex_count() const { return static_cast<int>(rot_.size()); }
  int edge_count() const;
  const std::vector<int>& rotation(int v) const { return rot_[v]; }
  std::vector<std::array<int, 3>> faces() const;
  std::vector<int> degrees() const;
  int degree(int v) const { return static_cast<int>(rot_[v].size()); }

  /// Splits v: it keeps neighbors rot[v][i..j] (cyclically), the new vertex
  /// keeps rot[v][j..i], and both become adjacent to rot[v][i] and rot[v][j].
  PlanarTriangulation split(int v, int i, int j) const;
  /// Deletes a degree-3 vertex; the three neighbors close the hole.
  PlanarTriangulation remove_degree3(int v) const;

  /// Equal for isomorphic triangulations (orientation either way).
  const std::vector<int>& canonical_code() const;
  bool isomorphic(const PlanarTriangulation& o) const { return canonical_code() == o.canonical_code(); }

  /// Labels "v0", "v1", ...
  TriMesh to_mesh() const;
  /// Every face a triangle, every edge in two faces, Euler characteristic 2.
  bool valid() const;

 private:
  std::vector<std::vector<int>> rot_;
  mutable std::vector<int> code_;
};

/// All classes with 4..n_max vertices, grouped by vertex count in increasing
/// order. Throws for n_max outside [4, 10].
std::vector<PlanarTriangulation> enumerate_triangulations(int n_max);

/// Removes the lowest-numbered degree-3 vertex until none is left or the
/// tetrahedron is reached.
PlanarTriangulation reduce_degree3(const PlanarTriangulation& t);

struct DegreeReport {
  int v4 = 0, v5 = 0, v6 = 0;
  int vertices = 0;
  bool identity_holds = false;  // 2 V4 + V5 = 12 and V4 + V5 + V6 = V
};

/// Throws for triangulations that still have degree-3 vertices or more
/// than 7 vertices.
DegreeReport degree_identity_check(const PlanarTriangulation& t);

enum class CandidateKind { octahedron, pentagonal_bipyramid, octahedron_plus_tent, other };
const char* to_string(CandidateKind k);

struct Candidate {
  PlanarTriangulation graph;
  PlanarTriangulation reduced;
  CandidateKind kind = CandidateKind::other;
};

/// Classes on at most n_max vertices whose reduction is not the tetrahedron.
std::vector<Candidate> flexibility_candidates(int n_max = 7);

struct RigidityProbe {
  int trials = 0;
  int min_flex_dimension = 0;
  int max_flex_dimension = 0;
};

/// flex_dimension at random configurations in the unit cube.
RigidityProbe generic_rigidity_probe(const PlanarTriangulation& t, int trials, std::uint64_t seed);

}  // namespace polyflex
