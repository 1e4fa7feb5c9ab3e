#include "polyflex/minimality.hpp"

#include <algorithm>
#include <map>
#include <random>
#include <set>
#include <stdexcept>

#include "polyflex/flex.hpp"

namespace polyflex {

PlanarTriangulation::PlanarTriangulation(std::vector<std::vector<int>> rot) : rot_(std::move(rot)) {}

PlanarTriangulation PlanarTriangulation::from_faces(int n, const std::vector<std::array<int, 3>>& faces) {
  std::vector<std::map<int, int>> next(n);
  for (const auto& f : faces)
    for (int k = 0; k < 3; ++k) {
      const int a = f[k], b = f[(k + 1) % 3], c = f[(k + 2) % 3];
      if (a < 0 || a >= n) throw GeometryError("face vertex out of range");
      if (!next[a].emplace(b, c).second) throw GeometryError("faces are not a consistently oriented surface");
    }
  std::vector<std::vector<int>> rot(n);
  for (int a = 0; a < n; ++a) {
    if (next[a].empty()) throw GeometryError("vertex in no face");
    int cur = next[a].begin()->first;
    do {
      rot[a].push_back(cur);
      auto it = next[a].find(cur);
      if (it == next[a].end() || rot[a].size() > next[a].size())
        throw GeometryError("vertex link is not a cycle");
      cur = it->second;
    } while (cur != rot[a].front());
    if (rot[a].size() != next[a].size()) throw GeometryError("vertex link is not a cycle");
  }
  return PlanarTriangulation(std::move(rot));
}

PlanarTriangulation PlanarTriangulation::tetrahedron() {
  return from_faces(4, {{0, 1, 2}, {0, 2, 3}, {0, 3, 1}, {1, 3, 2}});
}

namespace {

PlanarTriangulation bipyramid(int k) {
  std::vector<std::array<int, 3>> faces;
  for (int i = 0; i < k; ++i) {
    faces.push_back({k, (i + 1) % k, i});
    faces.push_back({k + 1, i, (i + 1) % k});
  }
  return PlanarTriangulation::from_faces(k + 2, faces);
}

}  // namespace

PlanarTriangulation PlanarTriangulation::octahedron() { return bipyramid(4); }
PlanarTriangulation PlanarTriangulation::pentagonal_bipyramid() { return bipyramid(5); }

int PlanarTriangulation::edge_count() const {
  std::size_t darts = 0;
  for (const auto& r : rot_) darts += r.size();
  return static_cast<int>(darts / 2);
}

std::vector<std::array<int, 3>> PlanarTriangulation::faces() const {
  std::vector<std::array<int, 3>> out;
  for (int a = 0; a < vertex_count(); ++a) {
    const auto& r = rot_[a];
    for (std::size_t k = 0; k < r.size(); ++k) {
      const int b = r[k], c = r[(k + 1) % r.size()];
      if (a < b && a < c) out.push_back({a, b, c});
    }
  }
  return out;
}

std::vector<int> PlanarTriangulation::degrees() const {
  std::vector<int> d;
  for (const auto& r : rot_) d.push_back(static_cast<int>(r.size()));
  return d;
}

PlanarTriangulation PlanarTriangulation::split(int v, int i, int j) const {
  const auto& nb = rot_.at(v);
  const int d = static_cast<int>(nb.size());
  if (i < 0 || j < 0 || i >= d || j >= d || i == j) throw GeometryError("bad vertex split");
  const int w = vertex_count();

  std::vector<int> keep, moved;
  for (int k = i;; k = (k + 1) % d) {
    keep.push_back(nb[k]);
    if (k == j) break;
  }
  keep.push_back(w);
  for (int k = j;; k = (k + 1) % d) {
    moved.push_back(nb[k]);
    if (k == i) break;
  }
  moved.push_back(v);

  std::vector<std::vector<int>> rot = rot_;
  auto pos = [&](int x) {
    return static_cast<std::size_t>(std::find(rot[x].begin(), rot[x].end(), v) - rot[x].begin());
  };
  const int ni = nb[i], nj = nb[j];
  rot[ni].insert(rot[ni].begin() + static_cast<long>(pos(ni)) + 1, w);
  rot[nj].insert(rot[nj].begin() + static_cast<long>(pos(nj)), w);
  for (int k = (j + 1) % d; k != i; k = (k + 1) % d) rot[nb[k]][pos(nb[k])] = w;
  rot[v] = std::move(keep);
  rot.push_back(std::move(moved));
  return PlanarTriangulation(std::move(rot));
}

PlanarTriangulation PlanarTriangulation::remove_degree3(int v) const {
  if (degree(v) != 3) throw GeometryError("vertex does not have degree 3");
  if (vertex_count() <= 4) throw GeometryError("cannot reduce the tetrahedron");
  std::vector<std::vector<int>> rot;
  for (int x = 0; x < vertex_count(); ++x) {
    if (x == v) continue;
    std::vector<int> r;
    for (int y : rot_[x])
      if (y != v) r.push_back(y > v ? y - 1 : y);
    rot.push_back(std::move(r));
  }
  return PlanarTriangulation(std::move(rot));
}

const std::vector<int>& PlanarTriangulation::canonical_code() const {
  if (!code_.empty() || rot_.empty()) return code_;
  const int n = vertex_count();
  std::vector<int> best, code, label(n), ref(n), order;
  for (int s = 0; s < n; ++s)
    for (int start : rot_[s])
      for (int dir : {1, -1}) {
        std::fill(label.begin(), label.end(), -1);
        order.assign(1, s);
        label[s] = 0;
        ref[s] = start;
        code.clear();
        bool worse = false;
        for (std::size_t idx = 0; idx < order.size() && !worse; ++idx) {
          const int x = order[idx];
          const auto& r = rot_[x];
          const int d = static_cast<int>(r.size());
          const int p = static_cast<int>(std::find(r.begin(), r.end(), ref[x]) - r.begin());
          code.push_back(d);
          for (int t = 0; t < d; ++t) {
            const int y = r[((p + dir * t) % d + d) % d];
            if (label[y] < 0) {
              label[y] = static_cast<int>(order.size());
              ref[y] = x;
              order.push_back(y);
            }
            code.push_back(label[y]);
          }
          // Prune as soon as the prefix is already larger than the best code.
          if (!best.empty()) {
            const auto m = std::mismatch(code.begin(), code.end(), best.begin());
            if (m.first != code.end() && *m.first > *m.second) worse = true;
            if (m.first != code.end() && *m.first < *m.second) best.clear();
          }
        }
        if (!worse && (best.empty() || code < best)) best = code;
      }
  code_ = best;
  return code_;
}

TriMesh PlanarTriangulation::to_mesh() const {
  std::vector<Label> verts;
  for (int v = 0; v < vertex_count(); ++v) verts.push_back("v" + std::to_string(v));
  std::vector<Face> faces;
  for (const auto& f : this->faces()) faces.push_back({verts[f[0]], verts[f[1]], verts[f[2]]});
  return TriMesh(std::move(verts), std::move(faces));
}

bool PlanarTriangulation::valid() const {
  const int n = vertex_count();
  if (n < 4) return false;
  std::size_t darts = 0;
  for (int a = 0; a < n; ++a) {
    const auto& r = rot_[a];
    if (r.size() < 3) return false;
    if (std::set<int>(r.begin(), r.end()).size() != r.size()) return false;
    darts += r.size();
    for (std::size_t k = 0; k < r.size(); ++k) {
      const int b = r[k], c = r[(k + 1) % r.size()];
      if (b == a || b < 0 || b >= n) return false;
      // Face (a, b, c) must also appear at b and at c.
      const auto& rb = rot_[b];
      const auto ib = std::find(rb.begin(), rb.end(), c);
      if (ib == rb.end() || rb[(static_cast<std::size_t>(ib - rb.begin()) + 1) % rb.size()] != a) return false;
    }
  }
  const long e = static_cast<long>(darts / 2), f = static_cast<long>(darts / 3);
  return darts % 6 == 0 && n - e + f == 2;
}

std::vector<PlanarTriangulation> enumerate_triangulations(int n_max) {
  if (n_max < 4 || n_max > 10) throw GeometryError("n_max must lie in [4, 10]");
  std::vector<PlanarTriangulation> all = {PlanarTriangulation::tetrahedron()};
  std::vector<PlanarTriangulation> level = all;
  for (int n = 5; n <= n_max; ++n) {
    std::map<std::vector<int>, PlanarTriangulation> next;
    for (const auto& t : level)
      for (int v = 0; v < t.vertex_count(); ++v)
        for (int i = 0; i < t.degree(v); ++i)
          for (int j = 0; j < t.degree(v); ++j) {
            if (i == j) continue;
            PlanarTriangulation s = t.split(v, i, j);
            next.emplace(s.canonical_code(), std::move(s));
          }
    level.clear();
    for (auto& [code, t] : next) level.push_back(std::move(t));
    all.insert(all.end(), level.begin(), level.end());
  }
  return all;
}

PlanarTriangulation reduce_degree3(const PlanarTriangulation& t) {
  PlanarTriangulation cur = t;
  while (cur.vertex_count() > 4) {
    int v = -1;
    for (int x = 0; x < cur.vertex_count() && v < 0; ++x)
      if (cur.degree(x) == 3) v = x;
    if (v < 0) break;
    cur = cur.remove_degree3(v);
  }
  return cur;
}

DegreeReport degree_identity_check(const PlanarTriangulation& t) {
  if (t.vertex_count() > 7) throw GeometryError("degree identity check needs at most 7 vertices");
  DegreeReport r;
  r.vertices = t.vertex_count();
  for (int d : t.degrees()) {
    if (d == 3) throw GeometryError("unreduced triangulation: it has a degree-3 vertex");
    if (d == 4) ++r.v4;
    if (d == 5) ++r.v5;
    if (d == 6) ++r.v6;
  }
  r.identity_holds = 2 * r.v4 + r.v5 == 12 && r.v4 + r.v5 + r.v6 == r.vertices;
  return r;
}

const char* to_string(CandidateKind k) {
  switch (k) {
    case CandidateKind::octahedron: return "octahedron";
    case CandidateKind::pentagonal_bipyramid: return "pentagonal bipyramid";
    case CandidateKind::octahedron_plus_tent: return "octahedron+tent";
    case CandidateKind::other: return "other";
  }
  return "other";
}

std::vector<Candidate> flexibility_candidates(int n_max) {
  const PlanarTriangulation octa = PlanarTriangulation::octahedron();
  const PlanarTriangulation bipy = PlanarTriangulation::pentagonal_bipyramid();
  std::vector<Candidate> out;
  for (const auto& t : enumerate_triangulations(n_max)) {
    Candidate c{t, reduce_degree3(t), CandidateKind::other};
    if (c.reduced.vertex_count() == 4) continue;
    if (c.reduced.isomorphic(octa) && t.vertex_count() == 6) c.kind = CandidateKind::octahedron;
    if (c.reduced.isomorphic(octa) && t.vertex_count() == 7) c.kind = CandidateKind::octahedron_plus_tent;
    if (c.reduced.isomorphic(bipy) && t.vertex_count() == 7) c.kind = CandidateKind::pentagonal_bipyramid;
    out.push_back(std::move(c));
  }
  return out;
}

RigidityProbe generic_rigidity_probe(const PlanarTriangulation& t, int trials, std::uint64_t seed) {
  if (trials < 1) throw GeometryError("need at least one trial");
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  const TriMesh mesh = t.to_mesh();
  RigidityProbe p;
  p.trials = trials;
  for (int k = 0; k < trials; ++k) {
    Configuration c;
    for (const Label& v : mesh.vertices()) c[v] = Point3(u(rng), u(rng), u(rng));
    const int f = flex_dimension(mesh, c);
    p.min_flex_dimension = k == 0 ? f : std::min(p.min_flex_dimension, f);
    p.max_flex_dimension = k == 0 ? f : std::max(p.max_flex_dimension, f);
  }
  return p;
}

}  // namespace polyflex
