// Unfolding a triangulated sphere into the plane, with fold tags and
// gluing keys, and SVG export of the result.
#pragma once

#include <Eigen/Dense>

#include <array>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "polyflex/flex.hpp"
#include "polyflex/mesh.hpp"

namespace polyflex {

using Point2 = Eigen::Vector2d;

/// mountain = solid, valley = dashed, score_both = dotted. Flat folds are
/// drawn solid.
enum class FoldTag { mountain, valley, flat, score_both };
const char* to_string(FoldTag t);
const char* stroke_class(FoldTag t);

struct NetFace {
  std::size_t face = 0;  // index into mesh.faces()
  Face labels;
  std::array<Point2, 3> xy;
  std::optional<std::size_t> parent;  // net face this one hangs from
};

struct NetCut {
  Edge edge;
  int glue_key = 0;  // both copies of the edge share it
  std::array<std::size_t, 2> net_faces{};
};

struct NetLayout {
  std::vector<NetFace> faces;
  std::vector<Edge> folds;  // spanning-tree edges, drawn inside the net
  std::vector<NetCut> cuts;
  std::map<std::string, FoldTag> tags;  // every mesh edge, by Edge::name()
  std::vector<std::pair<std::size_t, std::size_t>> overlaps;  // net face pairs
  std::vector<std::string> warnings;
};

struct UnfoldOptions {
  /// Root of the breadth-first tree. Default: first face touching "T" (else 0),
  /// moving on to the first root with an overlap-free net if that one overlaps.
  std::optional<std::size_t> root_face;
  /// Explicit fold edges; must form a spanning tree of the dual graph.
  std::optional<std::vector<Edge>> tree;
  /// Edges whose fold sign changes anywhere along it become score_both.
  const FlexTrajectory* trajectory = nullptr;
  Tolerance tol;
};

/// Throws GeometryError for open meshes and for tree selections that do not
/// span the dual graph. Overlapping faces only produce warnings.
NetLayout unfold(const TriMesh& mesh, const Configuration& config, const UnfoldOptions& opt = {});

/// max | 2D edge length - 3D edge length | over all net faces.
double max_congruence_error(const NetLayout& net, const Configuration& config);

std::string export_svg(const NetLayout& net);

}  // namespace polyflex
