// Labeled triangulated closed surfaces and their geometric diagnostics.
#pragma once

#include <array>
#include <compare>
#include <cstddef>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "polyflex/geometry.hpp"

namespace polyflex {

using Label = std::string;
using Face = std::array<Label, 3>;

/// Undirected edge; always stored with a < b.
struct Edge {
  Label a;
  Label b;

  static Edge make(const Label& u, const Label& v);
  std::string name() const { return a + "-" + b; }
  auto operator<=>(const Edge&) const = default;
};

class TriMesh {
 public:
  TriMesh() = default;
  /// Throws GeometryError for faces that reference unknown labels or repeat
  /// a label, and for duplicate vertex labels.
  TriMesh(std::vector<Label> vertices, std::vector<Face> faces);

  const std::vector<Label>& vertices() const { return vertices_; }
  const std::vector<Face>& faces() const { return faces_; }
  std::size_t vertex_count() const { return vertices_.size(); }
  std::size_t face_count() const { return faces_.size(); }

  /// Sorted, unique.
  std::vector<Edge> edges() const;
  bool has_vertex(const Label& v) const;
  bool has_edge(const Label& u, const Label& v) const;
  std::size_t degree(const Label& v) const;
  std::vector<Label> neighbors(const Label& v) const;
  /// Indices of faces containing both u and v.
  std::vector<std::size_t> faces_with_edge(const Label& u, const Label& v) const;

  /// All faces with reversed orientation.
  TriMesh reversed() const;

  bool operator==(const TriMesh&) const = default;

 private:
  std::vector<Label> vertices_;
  std::vector<Face> faces_;
};

using Configuration = std::map<Label, Point3>;

/// A mesh together with a placement of its vertices.
struct Realization {
  TriMesh mesh;
  Configuration config;
};

struct MeshReport {
  std::size_t vertices = 0;
  std::size_t edges = 0;
  std::size_t faces = 0;
  long euler = 0;
  bool closed = false;    // every edge in exactly two faces
  bool oriented = false;  // ...with opposite orientations
  std::vector<std::string> problems;

  /// Closed, oriented, Euler characteristic 2.
  bool is_sphere() const { return closed && oriented && euler == 2; }
  /// Sphere with E = 3V - 6 and F = 2V - 4.
  bool is_triangulated_sphere() const;
};

MeshReport validate(const TriMesh& mesh);

/// Throws GeometryError unless the configuration covers the mesh's vertices
/// with finite points (extra labels are an error as well).
void check_configuration(const TriMesh& mesh, const Configuration& config);

double configuration_scale(const Configuration& config);
std::vector<Point3> face_points(const Face& f, const Configuration& config);

/// Sum of signed tetra volumes against the origin. Throws for open meshes.
double signed_volume(const TriMesh& mesh, const Configuration& config);

enum class FoldSign { mountain, valley, flat };
const char* to_string(FoldSign s);

struct Fold {
  double angle = 0.0;  // interior dihedral in (0, 2 pi)
  FoldSign sign = FoldSign::flat;
};

/// Interior dihedral across an edge, measured with the mesh's orientation
/// taken as outward. Throws for boundary or non-manifold edges.
Fold dihedral(const TriMesh& mesh, const Configuration& config, const Edge& edge,
              const Tolerance& tol = {});

/// Fold sign of every edge, keyed by Edge::name().
std::map<std::string, FoldSign> fold_signs(const TriMesh& mesh, const Configuration& config,
                                           const Tolerance& tol = {});

struct IntersectingPair {
  std::size_t face_i = 0;  // face_i < face_j
  std::size_t face_j = 0;
  Point3 witness_from = Point3::Zero();
  Point3 witness_to = Point3::Zero();
};

struct IntersectionReport {
  std::vector<IntersectingPair> pairs;  // sorted by (face_i, face_j)

  bool empty() const { return pairs.empty(); }
  std::size_t size() const { return pairs.size(); }
  /// Faces present in every reported pair (sorted).
  std::vector<std::size_t> common_faces() const;
};

/// Triangle/triangle tests for every face pair that does not share an edge.
/// Pairs sharing one vertex only count if they overlap away from it.
IntersectionReport self_intersections(const TriMesh& mesh, const Configuration& config,
                                      const Tolerance& tol = {});

/// Smallest distance between two faces that share no vertex.
double min_face_clearance(const TriMesh& mesh, const Configuration& config);

/// min over faces of (altitude onto the longest side) / (longest side).
double min_triangle_quality(const TriMesh& mesh, const Configuration& config);
double triangle_quality(const Point3& a, const Point3& b, const Point3& c);

/// Edge length of every mesh edge, keyed by Edge::name().
std::map<std::string, double> edge_lengths(const TriMesh& mesh, const Configuration& config);

}  // namespace polyflex
