#include "polyflex/surgery.hpp"

#include <algorithm>
#include <numeric>
#include <set>

#include "polyflex/quad_symmetry.hpp"

namespace polyflex {

Realization split_edge(const Realization& r, const Label& from, const Label& to, double t,
                       const Label& new_label) {
  if (r.mesh.has_vertex(new_label)) throw GeometryError("label already in use: " + new_label);
  if (!(t > 0.0 && t < 1.0)) throw GeometryError("edge split parameter must lie in (0, 1)");
  const auto hits = r.mesh.faces_with_edge(from, to);
  if (hits.size() != 2) throw GeometryError("cannot split " + from + "-" + to + ": not an interior edge");

  std::vector<Face> faces;
  for (std::size_t k = 0; k < r.mesh.faces().size(); ++k) {
    const Face& f = r.mesh.faces()[k];
    if (std::find(hits.begin(), hits.end(), k) == hits.end()) {
      faces.push_back(f);
      continue;
    }
    for (int i = 0; i < 3; ++i) {
      const Label& x = f[i];
      const Label& y = f[(i + 1) % 3];
      if ((x == from && y == to) || (x == to && y == from)) {
        const Label& w = f[(i + 2) % 3];
        faces.push_back({x, new_label, w});
        faces.push_back({new_label, y, w});
        break;
      }
    }
  }
  std::vector<Label> verts = r.mesh.vertices();
  verts.push_back(new_label);
  Realization out{TriMesh(std::move(verts), std::move(faces)), r.config};
  out.config[new_label] = r.config.at(from) + t * (r.config.at(to) - r.config.at(from));
  return out;
}

std::vector<Label> Cap::interior() const {
  std::vector<Label> out;
  for (const Label& v : mesh.vertices())
    if (std::find(boundary.begin(), boundary.end(), v) == boundary.end()) out.push_back(v);
  return out;
}

CutResult cut_along_quad(const Realization& r, const SurfaceQuad& quad) {
  CutResult res;
  res.surface = r;
  for (int i = 0; i < 4; ++i) {
    if (const auto* ev = std::get_if<ExistingVertex>(&quad.anchors[i])) {
      if (!res.surface.mesh.has_vertex(ev->label))
        throw GeometryError("quad anchor is not a vertex: " + ev->label);
      res.quad[i] = ev->label;
    } else {
      const auto& pe = std::get<PointOnEdge>(quad.anchors[i]);
      res.surface = split_edge(res.surface, pe.from, pe.to, pe.t, pe.new_label);
      res.quad[i] = pe.new_label;
    }
  }
  for (int i = 0; i < 4; ++i)
    for (int j = i + 1; j < 4; ++j)
      if (res.quad[i] == res.quad[j]) throw GeometryError("repeated quad anchor: " + res.quad[i]);

  const TriMesh& mesh = res.surface.mesh;
  std::set<Edge> cut;
  for (int i = 0; i < 4; ++i) {
    if (!mesh.has_edge(res.quad[i], res.quad[(i + 1) % 4]))
      throw GeometryError("quad side not co-facial: " + res.quad[i] + "-" + res.quad[(i + 1) % 4]);
    cut.insert(Edge::make(res.quad[i], res.quad[(i + 1) % 4]));
  }

  // Connected components of the dual graph with the quad edges removed.
  const auto& faces = mesh.faces();
  std::vector<std::size_t> parent(faces.size());
  std::iota(parent.begin(), parent.end(), 0);
  auto find = [&](std::size_t x) {
    while (parent[x] != x) x = parent[x] = parent[parent[x]];
    return x;
  };
  std::map<Edge, std::size_t> first_face;
  for (std::size_t k = 0; k < faces.size(); ++k)
    for (int i = 0; i < 3; ++i) {
      const Edge e = Edge::make(faces[k][i], faces[k][(i + 1) % 3]);
      if (cut.count(e)) continue;
      auto [it, fresh] = first_face.emplace(e, k);
      if (!fresh) parent[find(k)] = find(it->second);
    }
  std::vector<std::size_t> roots;
  for (std::size_t k = 0; k < faces.size(); ++k)
    if (std::find(roots.begin(), roots.end(), find(k)) == roots.end()) roots.push_back(find(k));
  if (roots.size() != 2)
    throw GeometryError("quad cut gives " + std::to_string(roots.size()) + " pieces, expected 2");

  for (int c = 0; c < 2; ++c) {
    std::vector<Face> cf;
    std::set<Label> used;
    for (std::size_t k = 0; k < faces.size(); ++k)
      if (find(k) == roots[c]) {
        cf.push_back(faces[k]);
        used.insert(faces[k].begin(), faces[k].end());
      }
    std::vector<Label> cv;
    Configuration cc;
    for (const Label& v : mesh.vertices())
      if (used.count(v)) {
        cv.push_back(v);
        cc[v] = res.surface.config.at(v);
      }
    res.caps[c] = Cap{TriMesh(std::move(cv), std::move(cf)), std::move(cc), res.quad};
  }
  return res;
}

namespace {

std::set<std::pair<Label, Label>> half_edges(const TriMesh& m) {
  std::set<std::pair<Label, Label>> out;
  for (const Face& f : m.faces())
    for (int i = 0; i < 3; ++i) out.insert({f[i], f[(i + 1) % 3]});
  return out;
}

// Boundary cycle as a set of unordered sides.
std::set<Edge> boundary_sides(const std::array<Label, 4>& q) {
  std::set<Edge> out;
  for (int i = 0; i < 4; ++i) out.insert(Edge::make(q[i], q[(i + 1) % 4]));
  return out;
}

}  // namespace

Realization glue(const Cap& a, const Cap& b, const Tolerance& tol) {
  if (boundary_sides(a.boundary) != boundary_sides(b.boundary))
    throw GeometryError("caps incompatible: boundaries differ");
  const double scale = std::max(configuration_scale(a.config), configuration_scale(b.config));
  const auto& q = a.boundary;

  for (int i = 0; i < 4; ++i) {
    const Label& u = q[i];
    const Label& v = q[(i + 1) % 4];
    const double la = (a.config.at(u) - a.config.at(v)).norm();
    const double lb = (b.config.at(u) - b.config.at(v)).norm();
    if (std::abs(la - lb) > tol.eps_len * scale) throw GeometryError("caps incompatible: side lengths differ");
  }
  for (const Label& v : q)
    if ((a.config.at(v) - b.config.at(v)).norm() > tol.eps_len * scale)
      throw GeometryError("caps misaligned at " + v);

  const auto ha = half_edges(a.mesh);
  const auto hb = half_edges(b.mesh);
  for (int i = 0; i < 4; ++i) {
    const Label& u = q[i];
    const Label& v = q[(i + 1) % 4];
    const bool ok = (ha.count({u, v}) && hb.count({v, u})) || (ha.count({v, u}) && hb.count({u, v}));
    if (!ok) throw GeometryError("cap orientations clash along " + u + "-" + v);
  }

  std::vector<Label> verts = a.mesh.vertices();
  Configuration config = a.config;
  for (const Label& v : b.interior()) {
    if (a.mesh.has_vertex(v)) throw GeometryError("caps share interior label " + v);
    verts.push_back(v);
    config[v] = b.config.at(v);
  }
  std::vector<Face> faces = a.mesh.faces();
  faces.insert(faces.end(), b.mesh.faces().begin(), b.mesh.faces().end());
  return {TriMesh(std::move(verts), std::move(faces)), std::move(config)};
}

namespace {

std::size_t moving_index(const CutResult& cut, const SurgeryOptions& opt) {
  if (opt.moving_vertex) {
    for (std::size_t c = 0; c < 2; ++c) {
      const auto in = cut.caps[c].interior();
      if (std::find(in.begin(), in.end(), *opt.moving_vertex) != in.end()) return c;
    }
    throw GeometryError("moving vertex is not interior to either cap: " + *opt.moving_vertex);
  }
  return cut.caps[0].mesh.face_count() < cut.caps[1].mesh.face_count() ? 0 : 1;
}

// Applies `iso` to a cap and relabels it; `swap` maps boundary labels.
Cap transform_cap(const Cap& cap, const Isometry3& iso, const std::map<Label, Label>& swap,
                  const SurgeryOptions& opt, bool reverse) {
  std::map<Label, Label> name = swap;
  for (const Label& v : cap.interior()) {
    auto it = opt.rename.find(v);
    name[v] = it != opt.rename.end() ? it->second : v + "'";
  }
  auto nm = [&](const Label& v) {
    auto it = name.find(v);
    return it != name.end() ? it->second : v;
  };

  std::vector<Label> verts;
  Configuration config;
  for (const Label& v : cap.mesh.vertices()) {
    verts.push_back(nm(v));
    config[nm(v)] = iso(cap.config.at(v));
  }
  std::vector<Face> faces;
  for (const Face& f : cap.mesh.faces())
    faces.push_back(reverse ? Face{nm(f[0]), nm(f[2]), nm(f[1])} : Face{nm(f[0]), nm(f[1]), nm(f[2])});
  return Cap{TriMesh(std::move(verts), std::move(faces)), std::move(config), cap.boundary};
}

}  // namespace

Realization cut_and_twist(const Realization& r, const SurfaceQuad& quad, const SurgeryOptions& opt,
                          const Tolerance& tol) {
  const CutResult cut = cut_along_quad(r, quad);
  const auto& q = cut.quad;
  const Configuration& c = cut.surface.config;
  const Line3 axis = symmetry_line(c.at(q[0]), c.at(q[1]), c.at(q[2]), c.at(q[3]), tol);

  const std::size_t m = moving_index(cut, opt);
  const std::map<Label, Label> swap = {{q[0], q[2]}, {q[2], q[0]}, {q[1], q[3]}, {q[3], q[1]}};
  const Cap moved = transform_cap(cut.caps[m], half_rotation(axis), swap, opt, false);
  return glue(cut.caps[1 - m], moved, tol);
}

Realization cut_and_reflect(const Realization& r, const SurfaceQuad& quad, const SurgeryOptions& opt,
                            const Tolerance& tol) {
  const CutResult cut = cut_along_quad(r, quad);
  const auto& q = cut.quad;
  const Configuration& c = cut.surface.config;

  // Either q0, q2 lie on the mirror (q1 <-> q3) or q1, q3 do (q0 <-> q2).
  Plane3 plane;
  std::map<Label, Label> swap;
  if (has_reflective_lengths(c.at(q[0]), c.at(q[1]), c.at(q[2]), c.at(q[3]), tol)) {
    plane = symmetry_plane(c.at(q[0]), c.at(q[1]), c.at(q[2]), c.at(q[3]), tol);
    swap = {{q[1], q[3]}, {q[3], q[1]}};
  } else if (has_reflective_lengths(c.at(q[1]), c.at(q[2]), c.at(q[3]), c.at(q[0]), tol)) {
    plane = symmetry_plane(c.at(q[1]), c.at(q[2]), c.at(q[3]), c.at(q[0]), tol);
    swap = {{q[0], q[2]}, {q[2], q[0]}};
  } else {
    throw GeometryError("not reflectionally symmetric");
  }

  const std::size_t m = moving_index(cut, opt);
  const Cap moved = transform_cap(cut.caps[m], reflect_in_plane(plane), swap, opt, true);
  return glue(cut.caps[1 - m], moved, tol);
}

}  // namespace polyflex
