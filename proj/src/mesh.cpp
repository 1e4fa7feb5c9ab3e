#include "polyflex/mesh.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <set>

#include "polyflex/intersect.hpp"

namespace polyflex {

Edge Edge::make(const Label& u, const Label& v) {
  if (u == v) throw GeometryError("edge with equal endpoints: " + u);
  return u < v ? Edge{u, v} : Edge{v, u};
}

TriMesh::TriMesh(std::vector<Label> vertices, std::vector<Face> faces)
    : vertices_(std::move(vertices)), faces_(std::move(faces)) {
  std::set<Label> known;
  for (const Label& v : vertices_)
    if (!known.insert(v).second) throw GeometryError("duplicate vertex label: " + v);
  for (const Face& f : faces_) {
    for (const Label& v : f)
      if (!known.count(v)) throw GeometryError("face references unknown vertex: " + v);
    if (f[0] == f[1] || f[1] == f[2] || f[0] == f[2])
      throw GeometryError("face repeats a vertex: " + f[0] + "," + f[1] + "," + f[2]);
  }
}

std::vector<Edge> TriMesh::edges() const {
  std::set<Edge> out;
  for (const Face& f : faces_)
    for (int i = 0; i < 3; ++i) out.insert(Edge::make(f[i], f[(i + 1) % 3]));
  return {out.begin(), out.end()};
}

bool TriMesh::has_vertex(const Label& v) const {
  return std::find(vertices_.begin(), vertices_.end(), v) != vertices_.end();
}

bool TriMesh::has_edge(const Label& u, const Label& v) const {
  return u != v && !faces_with_edge(u, v).empty();
}

std::size_t TriMesh::degree(const Label& v) const { return neighbors(v).size(); }

std::vector<Label> TriMesh::neighbors(const Label& v) const {
  std::set<Label> out;
  for (const Face& f : faces_)
    for (int i = 0; i < 3; ++i)
      if (f[i] == v) {
        out.insert(f[(i + 1) % 3]);
        out.insert(f[(i + 2) % 3]);
      }
  return {out.begin(), out.end()};
}

std::vector<std::size_t> TriMesh::faces_with_edge(const Label& u, const Label& v) const {
  std::vector<std::size_t> out;
  for (std::size_t i = 0; i < faces_.size(); ++i) {
    const Face& f = faces_[i];
    const bool hu = f[0] == u || f[1] == u || f[2] == u;
    const bool hv = f[0] == v || f[1] == v || f[2] == v;
    if (hu && hv) out.push_back(i);
  }
  return out;
}

TriMesh TriMesh::reversed() const {
  std::vector<Face> faces;
  faces.reserve(faces_.size());
  for (const Face& f : faces_) faces.push_back({f[0], f[2], f[1]});
  return TriMesh(vertices_, std::move(faces));
}

bool MeshReport::is_triangulated_sphere() const {
  return is_sphere() && problems.empty() && edges + 6 == 3 * vertices && faces + 4 == 2 * vertices;
}

MeshReport validate(const TriMesh& mesh) {
  MeshReport r;
  r.vertices = mesh.vertex_count();
  r.faces = mesh.face_count();

  std::map<std::pair<Label, Label>, int> half_edges;
  for (const Face& f : mesh.faces())
    for (int i = 0; i < 3; ++i) ++half_edges[{f[i], f[(i + 1) % 3]}];

  const std::vector<Edge> edges = mesh.edges();
  r.edges = edges.size();
  r.euler = static_cast<long>(r.vertices) - static_cast<long>(r.edges) + static_cast<long>(r.faces);

  r.closed = true;
  r.oriented = true;
  for (const Edge& e : edges) {
    const int ab = half_edges.count({e.a, e.b}) ? half_edges[{e.a, e.b}] : 0;
    const int ba = half_edges.count({e.b, e.a}) ? half_edges[{e.b, e.a}] : 0;
    if (ab + ba != 2) {
      r.closed = false;
      r.problems.push_back("edge " + e.name() + " lies in " + std::to_string(ab + ba) + " faces");
    } else if (ab != 1) {
      r.oriented = false;
      r.problems.push_back("edge " + e.name() + " is not consistently oriented");
    }
  }

  // Every vertex link must be a single cycle.
  for (const Label& v : mesh.vertices()) {
    std::map<Label, Label> next;
    for (const Face& f : mesh.faces())
      for (int i = 0; i < 3; ++i)
        if (f[i] == v) next[f[(i + 1) % 3]] = f[(i + 2) % 3];
    if (next.empty()) {
      r.problems.push_back("vertex " + v + " is in no face");
      continue;
    }
    Label cur = next.begin()->first;
    std::size_t steps = 0;
    do {
      auto it = next.find(cur);
      if (it == next.end()) break;
      cur = it->second;
      ++steps;
    } while (cur != next.begin()->first && steps <= next.size());
    if (steps != next.size() || cur != next.begin()->first)
      r.problems.push_back("vertex " + v + " is not a manifold vertex");
  }
  return r;
}

void check_configuration(const TriMesh& mesh, const Configuration& config) {
  for (const Label& v : mesh.vertices()) {
    auto it = config.find(v);
    if (it == config.end()) throw GeometryError("configuration is missing vertex " + v);
    if (!it->second.allFinite()) throw GeometryError("non-finite position for vertex " + v);
  }
  if (config.size() != mesh.vertex_count())
    throw GeometryError("configuration has labels that are not mesh vertices");
}

double configuration_scale(const Configuration& config) {
  if (config.empty()) return 0.0;
  Point3 lo = config.begin()->second, hi = lo;
  for (const auto& [label, p] : config) {
    lo = lo.cwiseMin(p);
    hi = hi.cwiseMax(p);
  }
  return (hi - lo).norm();
}

std::vector<Point3> face_points(const Face& f, const Configuration& config) {
  return {config.at(f[0]), config.at(f[1]), config.at(f[2])};
}

double signed_volume(const TriMesh& mesh, const Configuration& config) {
  if (!validate(mesh).closed) throw GeometryError("volume of an open surface");
  double v = 0.0;
  for (const Face& f : mesh.faces())
    v += signed_volume_tetra(Point3::Zero(), config.at(f[0]), config.at(f[1]), config.at(f[2]));
  return v;
}

const char* to_string(FoldSign s) {
  switch (s) {
    case FoldSign::mountain: return "mountain";
    case FoldSign::valley: return "valley";
    case FoldSign::flat: return "flat";
  }
  return "flat";
}

Fold dihedral(const TriMesh& mesh, const Configuration& config, const Edge& edge,
              const Tolerance& tol) {
  // Find the face traversing a->b and the one traversing b->a.
  std::optional<Label> w0, w1;
  int hits = 0;
  for (const Face& f : mesh.faces())
    for (int i = 0; i < 3; ++i) {
      const Label& p = f[i];
      const Label& q = f[(i + 1) % 3];
      if (p == edge.a && q == edge.b) w0 = f[(i + 2) % 3], ++hits;
      if (p == edge.b && q == edge.a) w1 = f[(i + 2) % 3], ++hits;
    }
  if (hits != 2 || !w0 || !w1)
    throw GeometryError("edge " + edge.name() + " is not an interior manifold edge");

  const Point3& u = config.at(edge.a);
  const Point3& v = config.at(edge.b);
  const Point3& x0 = config.at(*w0);
  const Point3& x1 = config.at(*w1);

  const Vec3 e = (v - u).normalized();
  Vec3 p0 = x0 - u;
  Vec3 p1 = x1 - u;
  p0 -= p0.dot(e) * e;
  p1 -= p1.dot(e) * e;
  const double alpha = std::atan2(p0.cross(p1).norm(), p0.dot(p1));
  const Vec3 n0 = (v - u).cross(x0 - u);

  Fold fold;
  fold.angle = n0.dot(x1 - u) > 0.0 ? 2.0 * std::numbers::pi - alpha : alpha;
  const double flat_eps = std::sqrt(tol.eps_rank);
  if (std::abs(fold.angle - std::numbers::pi) <= flat_eps)
    fold.sign = FoldSign::flat;
  else
    fold.sign = fold.angle < std::numbers::pi ? FoldSign::mountain : FoldSign::valley;
  return fold;
}

std::map<std::string, FoldSign> fold_signs(const TriMesh& mesh, const Configuration& config,
                                           const Tolerance& tol) {
  std::map<std::string, FoldSign> out;
  for (const Edge& e : mesh.edges()) out[e.name()] = dihedral(mesh, config, e, tol).sign;
  return out;
}

std::vector<std::size_t> IntersectionReport::common_faces() const {
  if (pairs.empty()) return {};
  std::vector<std::size_t> common = {pairs.front().face_i, pairs.front().face_j};
  for (const IntersectingPair& p : pairs) {
    std::vector<std::size_t> keep;
    for (std::size_t f : common)
      if (f == p.face_i || f == p.face_j) keep.push_back(f);
    common = std::move(keep);
  }
  std::sort(common.begin(), common.end());
  return common;
}

namespace {

int shared_vertices(const Face& a, const Face& b) {
  int n = 0;
  for (const Label& x : a)
    for (const Label& y : b)
      if (x == y) ++n;
  return n;
}

Triangle triangle_of(const Face& f, const Configuration& config) {
  return {config.at(f[0]), config.at(f[1]), config.at(f[2])};
}

}  // namespace

IntersectionReport self_intersections(const TriMesh& mesh, const Configuration& config,
                                      const Tolerance& tol) {
  const double slack = tol.eps_geom * configuration_scale(config);
  const auto& faces = mesh.faces();
  IntersectionReport report;
  for (std::size_t i = 0; i < faces.size(); ++i) {
    const Triangle ti = triangle_of(faces[i], config);
    for (std::size_t j = i + 1; j < faces.size(); ++j) {
      if (shared_vertices(faces[i], faces[j]) >= 2) continue;
      if (auto seg = triangle_intersection(ti, triangle_of(faces[j], config), slack))
        report.pairs.push_back({i, j, seg->from, seg->to});
    }
  }
  return report;
}

double min_face_clearance(const TriMesh& mesh, const Configuration& config) {
  const auto& faces = mesh.faces();
  double best = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < faces.size(); ++i)
    for (std::size_t j = i + 1; j < faces.size(); ++j)
      if (shared_vertices(faces[i], faces[j]) == 0)
        best = std::min(best, triangle_distance(triangle_of(faces[i], config),
                                                triangle_of(faces[j], config)));
  return best;
}

double triangle_quality(const Point3& a, const Point3& b, const Point3& c) {
  const double longest = std::max({(b - a).norm(), (c - b).norm(), (a - c).norm()});
  if (longest == 0.0) return 0.0;
  return (b - a).cross(c - a).norm() / (longest * longest);
}

double min_triangle_quality(const TriMesh& mesh, const Configuration& config) {
  double best = std::numeric_limits<double>::infinity();
  for (const Face& f : mesh.faces())
    best = std::min(best, triangle_quality(config.at(f[0]), config.at(f[1]), config.at(f[2])));
  return best;
}

std::map<std::string, double> edge_lengths(const TriMesh& mesh, const Configuration& config) {
  std::map<std::string, double> out;
  for (const Edge& e : mesh.edges()) out[e.name()] = (config.at(e.a) - config.at(e.b)).norm();
  return out;
}

}  // namespace polyflex
