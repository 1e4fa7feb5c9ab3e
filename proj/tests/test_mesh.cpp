#include "doctest.h"
#include "oracle.hpp"
#include "polyflex/constructions.hpp"
#include "polyflex/mesh.hpp"

#include <set>

using namespace polyflex;

TEST_CASE("validate counts") {
  const MeshReport t = validate(oracle::tetrahedron().mesh);
  CHECK(t.vertices == 4);
  CHECK(t.edges == 6);
  CHECK(t.faces == 4);
  CHECK(t.euler == 2);
  CHECK(t.closed);
  CHECK(t.is_triangulated_sphere());
  const MeshReport o = validate(oracle::octahedron_topology());
  CHECK(o.vertices == 6);
  CHECK(o.edges == 12);
  CHECK(o.faces == 8);
  CHECK(o.euler == 2);

  auto faces = oracle::tetrahedron().mesh.faces();
  faces.pop_back();
  const MeshReport open = validate(TriMesh({"a", "b", "c", "d"}, faces));
  CHECK_FALSE(open.closed);
  CHECK_FALSE(open.is_triangulated_sphere());
  CHECK_FALSE(open.problems.empty());

  faces = oracle::tetrahedron().mesh.faces();
  std::swap(faces[0][0], faces[0][1]);
  const MeshReport flipped = validate(TriMesh({"a", "b", "c", "d"}, faces));
  CHECK(flipped.closed);
  CHECK_FALSE(flipped.oriented);
}

TEST_CASE("mesh construction errors") {
  CHECK_THROWS_AS(TriMesh({"a", "b"}, {{{"a", "b", "z"}}}), GeometryError);
  CHECK_THROWS_AS(TriMesh({"a", "b", "c"}, {{{"a", "a", "b"}}}), GeometryError);
  CHECK_THROWS_AS(TriMesh({"a", "a", "b"}, {}), GeometryError);
  const auto t = oracle::tetrahedron();
  Configuration c = t.config;
  c.erase("d");
  CHECK_THROWS_AS(check_configuration(t.mesh, c), GeometryError);
  c = t.config;
  c["z"] = Point3(0, 0, 0);
  CHECK_THROWS_AS(check_configuration(t.mesh, c), GeometryError);
  c = t.config;
  c["a"].x() = std::nan("");
  CHECK_THROWS_AS(check_configuration(t.mesh, c), GeometryError);
}

TEST_CASE("signed volume") {
  const auto cube = oracle::cube();
  CHECK(signed_volume(cube.mesh, cube.config) == doctest::Approx(1.0));
  CHECK(signed_volume(cube.mesh.reversed(), cube.config) == doctest::Approx(-1.0));
  const auto t = oracle::tetrahedron();
  // independent: |det| / 6 of the four corners
  const double v = std::abs(signed_volume_tetra(t.config.at("a"), t.config.at("b"), t.config.at("c"), t.config.at("d")));
  CHECK(signed_volume(t.mesh, t.config) == doctest::Approx(v));

  std::mt19937_64 rng(1);
  const Point3 shift = oracle::random_point(rng), k = oracle::random_unit(rng);
  Configuration moved, mirrored;
  for (const auto& [l, p] : cube.config) {
    moved[l] = oracle::rotate(p, shift, k, 0.7) + shift;
    mirrored[l] = oracle::mirror(p, shift, k);
  }
  CHECK(signed_volume(cube.mesh, moved) == doctest::Approx(1.0));
  CHECK(signed_volume(cube.mesh, mirrored) == doctest::Approx(-1.0));

  auto faces = t.mesh.faces();
  faces.pop_back();
  CHECK_THROWS_AS(signed_volume(TriMesh({"a", "b", "c", "d"}, faces), t.config), GeometryError);
}

TEST_CASE("dihedrals and fold signs") {
  const auto t = oracle::tetrahedron();
  for (const Edge& e : t.mesh.edges()) {
    const Fold f = dihedral(t.mesh, t.config, e);
    CHECK(f.sign == FoldSign::mountain);
    CHECK(f.angle == doctest::Approx(std::acos(1.0 / 3.0)));
  }
  // a bipyramid over a triangle with the top apex pressed into the base plane
  TriMesh m({"a", "b", "c", "n", "s"}, {{{"n", "a", "b"}}, {{"n", "b", "c"}}, {{"n", "c", "a"}},
                                        {{"s", "b", "a"}}, {{"s", "c", "b"}}, {{"s", "a", "c"}}});
  Configuration c = {{"a", {1, 0, 0}}, {"b", {-0.5, 0.8, 0}}, {"c", {-0.5, -0.8, 0}},
                     {"n", {0, 0, 0}}, {"s", {0, 0, -1}}};
  CHECK(dihedral(m, c, Edge::make("n", "a")).angle == doctest::Approx(M_PI));
  CHECK(dihedral(m, c, Edge::make("n", "a")).sign == FoldSign::flat);
  CHECK(dihedral(m, c, Edge::make("s", "a")).sign == FoldSign::mountain);
  // pushed further in, the edges at the apex become valleys
  c["n"] = Point3(0, 0, -0.5);
  CHECK(dihedral(m, c, Edge::make("n", "a")).sign == FoldSign::valley);
  CHECK(dihedral(m, c, Edge::make("n", "a")).angle > M_PI);
  CHECK(dihedral(m, c, Edge::make("a", "b")).sign == FoldSign::mountain);
  auto faces = t.mesh.faces();
  faces.pop_back();
  CHECK_THROWS_AS(dihedral(TriMesh({"a", "b", "c", "d"}, faces), t.config, Edge::make("c", "a")), GeometryError);
}

TEST_CASE("self-intersections") {
  const auto o = oracle::regular_octahedron();
  CHECK(self_intersections(o.mesh, o.config).empty());
  CHECK(min_face_clearance(o.mesh, o.config) > 0.5);
  const auto cube = oracle::cube();
  CHECK(self_intersections(cube.mesh, cube.config).empty());

  // pushing an apex through the opposite side of the octahedron
  Configuration c = o.config;
  c["n"] = Point3(2, 0.3, -1);
  const IntersectionReport r = self_intersections(o.mesh, c);
  CHECK_FALSE(r.empty());
  for (const auto& p : r.pairs) CHECK(p.face_i < p.face_j);
  for (std::size_t i = 1; i < r.pairs.size(); ++i)
    CHECK(std::pair(r.pairs[i - 1].face_i, r.pairs[i - 1].face_j) < std::pair(r.pairs[i].face_i, r.pairs[i].face_j));
}

TEST_CASE("triangle quality") {
  CHECK(triangle_quality({0, 0, 0}, {1, 0, 0}, {0.5, std::sqrt(3.0) / 2, 0}) == doctest::Approx(std::sqrt(3.0) / 2));
  CHECK(triangle_quality({0, 0, 0}, {1, 0, 0}, {2, 0, 0}) == doctest::Approx(0.0));
}

TEST_CASE("edge lengths") {
  const auto o = oracle::regular_octahedron();
  const auto lens = edge_lengths(o.mesh, o.config);
  CHECK(lens.size() == 12);
  for (const auto& [name, l] : lens) CHECK(l == doctest::Approx(std::sqrt(2.0)));
}

TEST_CASE("bricard octahedron intersection structure") {
  const DodecBuild b = build_dodecahedron(DodecParams::defaults());
  const IntersectionReport oct = self_intersections(b.octahedron.mesh, b.octahedron.config);
  CHECK_FALSE(oct.empty());
  // the report is closed under the half-rotation A<->A', B<->B', C<->C'
  // (which reverses the orientation of the surface, so faces match as sets)
  const std::map<Label, Label> swap = {{"A", "A'"}, {"A'", "A"}, {"B", "B'"}, {"B'", "B"}, {"C", "C'"}, {"C'", "C"}};
  const auto& faces = b.octahedron.mesh.faces();
  auto find_face = [&](const Face& f) {
    for (std::size_t k = 0; k < faces.size(); ++k)
      if (std::set<Label>(faces[k].begin(), faces[k].end()) == std::set<Label>(f.begin(), f.end())) return k;
    return faces.size();
  };
  std::set<std::pair<std::size_t, std::size_t>> pairs;
  for (const auto& p : oct.pairs) pairs.insert({p.face_i, p.face_j});
  for (const auto& p : oct.pairs) {
    Face fi = faces[p.face_i], fj = faces[p.face_j];
    for (auto& l : fi) l = swap.at(l);
    for (auto& l : fj) l = swap.at(l);
    const std::size_t i = find_face(fi), j = find_face(fj);
    CHECK(pairs.count({std::min(i, j), std::max(i, j)}) == 1);
  }

  const IntersectionReport dec = self_intersections(b.decahedron.mesh, b.decahedron.config);
  REQUIRE_FALSE(dec.empty());
  const auto common = dec.common_faces();
  REQUIRE(common.size() == 1);
  CHECK(b.decahedron.mesh.faces()[common[0]] == b.tent_face);
}
