#include "doctest.h"
#include "oracle.hpp"
#include "polyflex/flex.hpp"
#include "polyflex/quad_symmetry.hpp"

using namespace polyflex;

namespace {

const Point3 kA1(2, -1, -1), kB1(1, 1.5, 1.5), kA1p(-2, 1, -1), kB1p(-1, -1.5, 1.5);
const Point3 kA2(2, 0, 0), kB2(1.8, -1.5, 1.5), kA2p(-2, 0, 0), kB2p(1.8, -1.5, -1.5);

bool same_line(const Line3& l, const Point3& c, const Vec3& k) {
  return std::abs(std::abs(l.direction.dot(k)) - 1.0) < 1e-9 && l.distance_to(c) < 1e-9;
}

}  // namespace

TEST_CASE("rotational quadrilateral with skew coordinates gives the z-axis") {
  const Line3 l = symmetry_line(kA1, kB1, kA1p, kB1p);
  CHECK(same_line(l, {0, 0, 0}, {0, 0, 1}));
  CHECK(std::holds_alternative<RotationalAboutLine>(classify_quad(kA1, kB1, kA1p, kB1p)));
}

TEST_CASE("reflective quadrilateral gives the plane z = 0") {
  const Plane3 p = symmetry_plane(kA2, kB2, kA2p, kB2p);
  CHECK(std::abs(std::abs(p.normal.z()) - 1.0) < 1e-12);
  CHECK(std::abs(p.signed_distance({0, 0, 0})) < 1e-12);
  CHECK(std::holds_alternative<ReflectiveInPlane>(classify_quad(kA2, kB2, kA2p, kB2p)));
}

TEST_CASE("planar special cases") {
  const Line3 l = symmetry_line({1, 1, 0}, {-1, 1, 0}, {-1, -1, 0}, {1, -1, 0});
  CHECK(same_line(l, {0, 0, 0}, {0, 0, 1}));
  const Plane3 p = symmetry_plane({0, 0, 1}, {1, 0, 0}, {0, 0, -1}, {-1, 0, 0});
  CHECK(std::abs(std::abs(p.normal.x()) - 1.0) < 1e-12);
  CHECK(std::abs(p.signed_distance({0, 0, 0})) < 1e-12);
}

TEST_CASE("construct then recover symmetry lines") {
  std::mt19937_64 rng(101);
  for (int trial = 0; trial < 1000; ++trial) {
    const Point3 c = oracle::random_point(rng), k = oracle::random_unit(rng);
    const Point3 a = oracle::random_point(rng), b = oracle::random_point(rng);
    const Point3 a2 = oracle::rotate(a, c, k, M_PI), b2 = oracle::rotate(b, c, k, M_PI);
    const Line3 l = symmetry_line(a, b, a2, b2);
    CHECK(same_line(l, c, k));
    const Isometry3 h = half_rotation(l);
    CHECK((h(a) - a2).norm() < 1e-9);
    CHECK((h(b) - b2).norm() < 1e-9);
    // perpendicular to both diagonals
    CHECK(std::abs(l.direction.dot((a2 - a).normalized())) < 1e-9);
    CHECK(std::abs(l.direction.dot((b2 - b).normalized())) < 1e-9);
  }
}

TEST_CASE("construct then recover symmetry planes") {
  std::mt19937_64 rng(202);
  for (int trial = 0; trial < 1000; ++trial) {
    const Point3 a = oracle::random_point(rng), a2 = oracle::random_point(rng);
    const Vec3 n = (a2 - a).cross(oracle::random_unit(rng)).normalized();
    const Point3 b = oracle::random_point(rng), b2 = oracle::mirror(b, a, n);
    const Plane3 p = symmetry_plane(a, b, a2, b2);
    CHECK(std::abs(p.signed_distance(a)) < 1e-9);
    CHECK(std::abs(p.signed_distance(a2)) < 1e-9);
    CHECK((reflect_in_plane(p)(b) - b2).norm() < 1e-9);
    CHECK(std::abs(p.normal.dot((b2 - b).normalized())) > 1 - 1e-9);
    CHECK(std::abs(p.signed_distance(0.5 * (b + b2))) < 1e-9);
  }
}

TEST_CASE("symmetry preconditions") {
  std::mt19937_64 rng(5);
  const Point3 a = oracle::random_point(rng), b = oracle::random_point(rng), c = oracle::random_point(rng),
               d = oracle::random_point(rng);
  CHECK(std::holds_alternative<NoSymmetry>(classify_quad(a, b, c, d)));
  CHECK_THROWS_AS(symmetry_line(a, b, c, d), GeometryError);
  CHECK_THROWS_AS(symmetry_plane(a, b, c, d), GeometryError);
  CHECK_THROWS_AS(symmetry_line(a, a, a, a), GeometryError);
}

TEST_CASE("a symmetric quadrilateral has two degrees of freedom") {
  CHECK(quad_dof_check(kA1, kB1, kA1p, kB1p) == 2);
  CHECK(quad_dof_check({0, 0, 0}, {2, 0, 0}, {2.5, 1.5, 0}, {0.2, 1, 0}) == 2);
  CHECK_THROWS_AS(quad_dof_check({0, 0, 0}, {1, 0, 0}, {2, 0, 0}, {3, 0, 0}), GeometryError);
}
