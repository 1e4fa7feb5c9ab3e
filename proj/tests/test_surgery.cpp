#include <algorithm>
#include <set>

#include "doctest.h"
#include "oracle.hpp"
#include "polyflex/surgery.hpp"

using namespace polyflex;

namespace {

SurfaceQuad equator() {
  return {{ExistingVertex{"e0"}, ExistingVertex{"e1"}, ExistingVertex{"e2"}, ExistingVertex{"e3"}}};
}

// Octahedron over a skew quad with opposite sides equal.
Realization skew_rotational() {
  return {oracle::octahedron_topology(),
          {{"e0", {2, -1, -1}}, {"e1", {1, 1.5, 1.5}}, {"e2", {-2, 1, -1}}, {"e3", {-1, -1.5, 1.5}},
           {"n", {0.4, 0.3, 3.0}}, {"s", {-0.2, 0.5, -2.5}}}};
}

// Octahedron over a kite: e1, e3 mirror images in z = 0.
Realization kite_reflective() {
  return {oracle::octahedron_topology(),
          {{"e0", {2, 0, 0}}, {"e1", {1.8, -1.5, 1.5}}, {"e2", {-2, 0, 0}}, {"e3", {1.8, -1.5, -1.5}},
           {"n", {0.3, 2.0, 0.4}}, {"s", {0.5, -3.0, 0.2}}}};
}

std::vector<double> sorted_lengths(const Realization& r) {
  std::vector<double> out;
  for (const auto& [name, l] : edge_lengths(r.mesh, r.config)) out.push_back(l);
  std::sort(out.begin(), out.end());
  return out;
}

void check_same_lengths(const Realization& a, const Realization& b) {
  const auto la = sorted_lengths(a), lb = sorted_lengths(b);
  REQUIRE(la.size() == lb.size());
  for (std::size_t i = 0; i < la.size(); ++i) CHECK(std::abs(la[i] - lb[i]) < 1e-9);
}

std::set<std::vector<Label>> face_set(const TriMesh& m) {
  std::set<std::vector<Label>> out;
  for (Face f : m.faces()) {
    std::rotate(f.begin(), std::min_element(f.begin(), f.end()), f.end());
    out.insert({f[0], f[1], f[2]});
  }
  return out;
}

}  // namespace

TEST_CASE("split edge") {
  const auto t = oracle::tetrahedron();
  const Realization r = split_edge(t, "a", "b", 0.5, "m");
  const MeshReport rep = validate(r.mesh);
  CHECK(rep.vertices == 5);
  CHECK(rep.edges == 9);
  CHECK(rep.faces == 6);
  CHECK(rep.is_triangulated_sphere());
  CHECK((r.config.at("m") - 0.5 * (t.config.at("a") + t.config.at("b"))).norm() < 1e-15);
  CHECK(signed_volume(r.mesh, r.config) == doctest::Approx(signed_volume(t.mesh, t.config)));
  CHECK_THROWS_AS(split_edge(t, "a", "b", 0.0, "m"), GeometryError);
  CHECK_THROWS_AS(split_edge(t, "a", "b", 1.2, "m"), GeometryError);
  CHECK_THROWS_AS(split_edge(t, "a", "b", 0.5, "c"), GeometryError);

  // Euler characteristic survives repeated splits
  Realization s = oracle::regular_octahedron();
  for (int i = 0; i < 10; ++i) {
    const Edge e = s.mesh.edges()[(7 * i) % s.mesh.edges().size()];
    s = split_edge(s, e.a, e.b, 0.3, "x" + std::to_string(i));
    CHECK(validate(s.mesh).is_triangulated_sphere());
  }
}

TEST_CASE("cut along the equator gives two pyramids") {
  const auto o = oracle::regular_octahedron();
  const CutResult cut = cut_along_quad(o, equator());
  for (const Cap& c : cut.caps) {
    CHECK(c.mesh.face_count() == 4);
    CHECK(c.interior().size() == 1);
  }
  CHECK(cut.caps[0].mesh.face_count() + cut.caps[1].mesh.face_count() == 8);
}

TEST_CASE("cut through a point on an edge") {
  const auto o = oracle::regular_octahedron();
  const SurfaceQuad q{{PointOnEdge{"e0", "n", 0.5, "m"}, ExistingVertex{"e1"}, ExistingVertex{"s"}, ExistingVertex{"e3"}}};
  const CutResult cut = cut_along_quad(o, q);
  CHECK(cut.surface.mesh.vertex_count() == 7);
  CHECK(cut.caps[0].mesh.face_count() + cut.caps[1].mesh.face_count() == 10);
}

TEST_CASE("cut errors") {
  const auto o = oracle::regular_octahedron();
  SurfaceQuad rep{{ExistingVertex{"e0"}, ExistingVertex{"e1"}, ExistingVertex{"e0"}, ExistingVertex{"e3"}}};
  CHECK_THROWS_WITH_AS(cut_along_quad(o, rep), doctest::Contains("repeated quad anchor"), GeometryError);
  SurfaceQuad skew{{ExistingVertex{"e0"}, ExistingVertex{"e2"}, ExistingVertex{"e1"}, ExistingVertex{"e3"}}};
  CHECK_THROWS_WITH_AS(cut_along_quad(o, skew), doctest::Contains("co-facial"), GeometryError);
}

TEST_CASE("glue round trip") {
  const auto o = kite_reflective();
  const CutResult cut = cut_along_quad(o, equator());
  const Realization back = glue(cut.caps[0], cut.caps[1]);
  CHECK(face_set(back.mesh) == face_set(o.mesh));
  for (const auto& [l, p] : o.config) CHECK((back.config.at(l) - p).norm() < 1e-15);

  Cap stretched = cut.caps[1];
  stretched.config["e0"] *= 1.1;
  CHECK_THROWS_WITH_AS(glue(cut.caps[0], stretched), doctest::Contains("caps incompatible"), GeometryError);
  Cap flipped = cut.caps[1];
  flipped.mesh = flipped.mesh.reversed();
  CHECK_THROWS_WITH_AS(glue(cut.caps[0], flipped), doctest::Contains("orientations clash"), GeometryError);
  CHECK_THROWS_AS(glue(cut.caps[0], cut.caps[0]), GeometryError);
}

TEST_CASE("cut and twist") {
  const auto o = skew_rotational();
  const Realization t = cut_and_twist(o, equator());
  CHECK(validate(t.mesh).is_triangulated_sphere());
  check_same_lengths(o, t);
  // the default moving cap is caps[1] on a tie; its apex gets a prime
  CHECK((t.config.count("s'") + t.config.count("n'")) == 1);

  const Realization tt = cut_and_twist(t, equator());
  const Label moved = t.config.count("s'") ? "s" : "n";
  CHECK((tt.config.at(moved + "''") - o.config.at(moved)).norm() < 1e-9);

  SurgeryOptions opt;
  opt.moving_vertex = "n";
  opt.rename = {{"n", "N"}};
  const Realization tn = cut_and_twist(o, equator(), opt);
  CHECK(tn.config.count("N") == 1);
  // the north apex lands on its half-rotation image about the z-axis
  CHECK((tn.config.at("N") - oracle::rotate(o.config.at("n"), {0, 0, 0}, {0, 0, 1}, M_PI)).norm() < 1e-9);

  CHECK_THROWS_AS(cut_and_twist(kite_reflective(), equator()), GeometryError);
}

TEST_CASE("cut and reflect") {
  const auto o = kite_reflective();
  const Realization r = cut_and_reflect(o, equator());
  CHECK(validate(r.mesh).is_triangulated_sphere());
  check_same_lengths(o, r);
  const Realization rr = cut_and_reflect(r, equator());
  const Label moved = r.config.count("s'") ? "s" : "n";
  CHECK((rr.config.at(moved + "''") - o.config.at(moved)).norm() < 1e-9);
  CHECK((r.config.at(moved + "'") - oracle::mirror(o.config.at(moved), {0, 0, 0}, {0, 0, 1})).norm() < 1e-9);
  CHECK_THROWS_AS(cut_and_reflect(skew_rotational(), equator()), GeometryError);
}
