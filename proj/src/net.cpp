#include "polyflex/net.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <numeric>
#include <random>
#include <set>
#include <sstream>

#include "polyflex/intersect.hpp"

namespace polyflex {

const char* to_string(FoldTag t) {
  switch (t) {
    case FoldTag::mountain: return "mountain";
    case FoldTag::valley: return "valley";
    case FoldTag::flat: return "flat";
    case FoldTag::score_both: return "score-both";
  }
  return "flat";
}

const char* stroke_class(FoldTag t) {
  switch (t) {
    case FoldTag::valley: return "dashed";
    case FoldTag::score_both: return "dotted";
    default: return "solid";
  }
}

namespace {

int slot_of(const Face& f, const Label& v) {
  for (int i = 0; i < 3; ++i)
    if (f[i] == v) return i;
  return -1;
}

// Apex of a triangle on the side of the line pq away from `away`.
Point2 place(const Point2& p, const Point2& q, double dp, double dq, const Point2& away) {
  const double d = (q - p).norm();
  const Point2 e = (q - p) / d;
  Point2 n(-e.y(), e.x());
  if (n.dot(away - p) > 0) n = -n;
  const double a = (dp * dp - dq * dq + d * d) / (2.0 * d);
  const double h = std::sqrt(std::max(0.0, dp * dp - a * a));
  return p + a * e + h * n;
}

}  // namespace

namespace {

NetLayout unfold_from(const TriMesh& mesh, const Configuration& config, std::size_t root,
                      const UnfoldOptions& opt) {
  const auto& faces = mesh.faces();
  const std::size_t nf = faces.size();

  std::map<Edge, std::vector<std::size_t>> edge_faces;
  for (std::size_t k = 0; k < nf; ++k)
    for (int i = 0; i < 3; ++i) edge_faces[Edge::make(faces[k][i], faces[k][(i + 1) % 3])].push_back(k);

  std::set<Edge> allowed;
  if (opt.tree) {
    for (const Edge& e : *opt.tree) {
      if (!edge_faces.count(e)) throw GeometryError("tree edge " + e.name() + " is not a mesh edge");
      allowed.insert(e);
    }
    if (allowed.size() + 1 != nf) throw GeometryError("tree selection does not span the dual graph");
  }

  NetLayout net;
  auto len = [&](const Label& a, const Label& b) { return (config.at(a) - config.at(b)).norm(); };
  std::vector<long> net_of(nf, -1);

  {
    const Face& f = faces[root];
    NetFace nf0{root, f, {}, std::nullopt};
    nf0.xy[0] = Point2(0, 0);
    nf0.xy[1] = Point2(len(f[0], f[1]), 0);
    nf0.xy[2] = place(nf0.xy[0], nf0.xy[1], len(f[0], f[2]), len(f[1], f[2]), Point2(0, -1));
    net.faces.push_back(nf0);
    net_of[root] = 0;
  }

  std::deque<std::size_t> queue = {root};
  while (!queue.empty()) {
    const std::size_t k = queue.front();
    queue.pop_front();
    const NetFace parent = net.faces[net_of[k]];
    for (int i = 0; i < 3; ++i) {
      const Label& u = faces[k][i];
      const Label& v = faces[k][(i + 1) % 3];
      const Edge e = Edge::make(u, v);
      if (opt.tree && !allowed.count(e)) continue;
      for (std::size_t g : edge_faces[e]) {
        if (g == k || net_of[g] >= 0) continue;
        const Face& f = faces[g];
        const int su = slot_of(f, u), sv = slot_of(f, v), sw = 3 - su - sv;
        NetFace child{g, f, {}, static_cast<std::size_t>(net_of[k])};
        child.xy[su] = parent.xy[i];
        child.xy[sv] = parent.xy[(i + 1) % 3];
        child.xy[sw] = place(parent.xy[i], parent.xy[(i + 1) % 3], len(u, f[sw]), len(v, f[sw]),
                             parent.xy[(i + 2) % 3]);
        net_of[g] = static_cast<long>(net.faces.size());
        net.faces.push_back(child);
        net.folds.push_back(e);
        queue.push_back(g);
      }
    }
  }
  if (net.faces.size() != nf) throw GeometryError("tree selection does not span the dual graph");

  // Every edge that is not a fold is cut; its two copies share a glue key.
  const std::set<Edge> fold_set(net.folds.begin(), net.folds.end());
  int key = 0;
  for (const auto& [e, fs] : edge_faces) {
    if (fold_set.count(e)) continue;
    net.cuts.push_back({e, key++, {static_cast<std::size_t>(net_of[fs[0]]), static_cast<std::size_t>(net_of[fs[1]])}});
  }

  const auto signs = fold_signs(mesh, config, opt.tol);
  std::set<std::string> changing;
  if (opt.trajectory)
    for (const auto& name : opt.trajectory->sign_changing_edges()) changing.insert(name);
  for (const auto& [name, sign] : signs) {
    FoldTag t = sign == FoldSign::mountain ? FoldTag::mountain
                : sign == FoldSign::valley ? FoldTag::valley
                                           : FoldTag::flat;
    if (changing.count(name)) t = FoldTag::score_both;
    net.tags[name] = t;
  }

  double extent = 0.0;
  for (const NetFace& f : net.faces)
    for (const Point2& p : f.xy) extent = std::max(extent, p.norm());
  const double slack = 1e-9 * std::max(extent, 1.0);
  for (std::size_t i = 0; i < net.faces.size(); ++i)
    for (std::size_t j = i + 1; j < net.faces.size(); ++j) {
      Triangle a, b;
      for (int k = 0; k < 3; ++k) {
        a[k] = Point3(net.faces[i].xy[k].x(), net.faces[i].xy[k].y(), 0.0);
        b[k] = Point3(net.faces[j].xy[k].x(), net.faces[j].xy[k].y(), 0.0);
      }
      if (triangle_intersection(a, b, slack)) {
        net.overlaps.push_back({i, j});
        net.warnings.push_back("net faces " + std::to_string(net.faces[i].face) + " and " +
                               std::to_string(net.faces[j].face) + " overlap");
      }
    }
  return net;
}

}  // namespace

NetLayout unfold(const TriMesh& mesh, const Configuration& config, const UnfoldOptions& opt) {
  const MeshReport rep = validate(mesh);
  if (!rep.closed) throw GeometryError("cannot unfold an open surface");
  check_configuration(mesh, config);
  const auto& faces = mesh.faces();
  if (opt.root_face) {
    if (*opt.root_face >= faces.size()) throw GeometryError("root face out of range");
    return unfold_from(mesh, config, *opt.root_face, opt);
  }
  std::size_t root = 0;
  for (std::size_t k = 0; k < faces.size(); ++k)
    if (slot_of(faces[k], "T") >= 0) {
      root = k;
      break;
    }
  NetLayout net = unfold_from(mesh, config, root, opt);
  if (net.overlaps.empty() || opt.tree) return net;
  // The tented root overlaps: take the first other root whose net does not.
  for (std::size_t k = 0; k < faces.size(); ++k) {
    if (k == root) continue;
    NetLayout alt = unfold_from(mesh, config, k, opt);
    if (alt.overlaps.empty()) return alt;
  }
  // Then random spanning trees (Kruskal on shuffled dual edges), fixed seed.
  std::vector<Edge> dual;
  for (const Edge& e : mesh.edges()) dual.push_back(e);
  std::mt19937 rng(1);
  for (int attempt = 0; attempt < 2000; ++attempt) {
    std::shuffle(dual.begin(), dual.end(), rng);
    std::vector<std::size_t> parent(faces.size());
    std::iota(parent.begin(), parent.end(), 0);
    auto find = [&](std::size_t x) {
      while (parent[x] != x) x = parent[x] = parent[parent[x]];
      return x;
    };
    UnfoldOptions o = opt;
    o.tree.emplace();
    for (const Edge& e : dual) {
      const auto fs = mesh.faces_with_edge(e.a, e.b);
      const std::size_t a = find(fs[0]), b = find(fs[1]);
      if (a == b) continue;
      parent[a] = b;
      o.tree->push_back(e);
    }
    NetLayout alt = unfold_from(mesh, config, root, o);
    if (alt.overlaps.empty()) return alt;
  }
  return net;
}

double max_congruence_error(const NetLayout& net, const Configuration& config) {
  double worst = 0.0;
  for (const NetFace& f : net.faces)
    for (int i = 0; i < 3; ++i) {
      const int j = (i + 1) % 3;
      const double l2 = (f.xy[i] - f.xy[j]).norm();
      const double l3 = (config.at(f.labels[i]) - config.at(f.labels[j])).norm();
      worst = std::max(worst, std::abs(l2 - l3));
    }
  return worst;
}

std::string export_svg(const NetLayout& net) {
  static const char* palette[] = {"#d62728", "#1f77b4", "#2ca02c", "#ff7f0e", "#9467bd", "#8c564b",
                                  "#e377c2", "#17becf", "#bcbd22", "#7f7f7f", "#393b79", "#637939"};
  Point2 lo(1e300, 1e300), hi(-1e300, -1e300);
  for (const NetFace& f : net.faces)
    for (const Point2& p : f.xy) {
      lo = lo.cwiseMin(p);
      hi = hi.cwiseMax(p);
    }
  const double margin = 0.05 * std::max((hi - lo).maxCoeff(), 1e-9);
  const double unit = 600.0 / std::max((hi - lo).maxCoeff() + 2 * margin, 1e-9);
  auto X = [&](const Point2& p) { return (p.x() - lo.x() + margin) * unit; };
  auto Y = [&](const Point2& p) { return (hi.y() - p.y() + margin) * unit; };
  const double w = (hi.x() - lo.x() + 2 * margin) * unit;
  const double h = (hi.y() - lo.y() + 2 * margin) * unit;

  std::map<Edge, int> glue;
  for (const NetCut& c : net.cuts) glue[c.edge] = c.glue_key;
  const std::set<Edge> folds(net.folds.begin(), net.folds.end());

  std::ostringstream s;
  s.precision(6);
  s << std::fixed;
  s << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << w << "\" height=\"" << h
    << "\" viewBox=\"0 0 " << w << ' ' << h << "\">\n";
  s << "<style>line{stroke-width:2;fill:none}.solid{}.dashed{stroke-dasharray:8 5}"
       ".dotted{stroke-dasharray:1.5 4;stroke-linecap:round}"
       "polygon{fill:#f4f1ea;stroke:none}text{font:11px sans-serif;fill:#333}</style>\n";
  for (const NetFace& f : net.faces) {
    s << "<polygon points=\"";
    for (const Point2& p : f.xy) s << X(p) << ',' << Y(p) << ' ';
    s << "\"/>\n";
  }
  std::set<Edge> drawn_folds;
  for (const NetFace& f : net.faces)
    for (int i = 0; i < 3; ++i) {
      const Edge e = Edge::make(f.labels[i], f.labels[(i + 1) % 3]);
      const bool fold = folds.count(e) > 0;
      if (fold && !drawn_folds.insert(e).second) continue;
      const Point2& a = f.xy[i];
      const Point2& b = f.xy[(i + 1) % 3];
      const FoldTag tag = net.tags.count(e.name()) ? net.tags.at(e.name()) : FoldTag::flat;
      const char* color = fold ? "#000000" : palette[glue.at(e) % 12];
      s << "<line class=\"" << stroke_class(tag) << "\" data-edge=\"" << e.name() << "\" data-tag=\""
        << to_string(tag) << "\" stroke=\"" << color << "\" x1=\"" << X(a) << "\" y1=\"" << Y(a)
        << "\" x2=\"" << X(b) << "\" y2=\"" << Y(b) << "\"/>\n";
    }
  for (const NetFace& f : net.faces) {
    const Point2 c = (f.xy[0] + f.xy[1] + f.xy[2]) / 3.0;
    for (int i = 0; i < 3; ++i) {
      const Point2 p = f.xy[i] + 0.18 * (c - f.xy[i]);
      s << "<text x=\"" << X(p) << "\" y=\"" << Y(p) << "\" text-anchor=\"middle\">" << f.labels[i]
        << "</text>\n";
    }
  }
  s << "</svg>\n";
  return s.str();
}

}  // namespace polyflex
