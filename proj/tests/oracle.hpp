// Small helpers shared by the tests. Nothing here calls into polyflex
// algorithms beyond plain data types.
#pragma once

#include <cmath>
#include <random>

#include "polyflex/mesh.hpp"

namespace oracle {

using polyflex::Point3;

inline Point3 random_point(std::mt19937_64& rng, double r = 3.0) {
  std::uniform_real_distribution<double> u(-r, r);
  return {u(rng), u(rng), u(rng)};
}

inline Point3 random_unit(std::mt19937_64& rng) {
  std::normal_distribution<double> g;
  Point3 v(g(rng), g(rng), g(rng));
  return v.normalized();
}

// Rodrigues rotation of p about the line (c, unit k) by angle t.
inline Point3 rotate(const Point3& p, const Point3& c, const Point3& k, double t) {
  const Point3 v = p - c;
  return c + v * std::cos(t) + k.cross(v) * std::sin(t) + k * k.dot(v) * (1 - std::cos(t));
}

inline Point3 mirror(const Point3& p, const Point3& c, const Point3& n) { return p - 2 * n.dot(p - c) * n; }

inline polyflex::Realization tetrahedron() {
  polyflex::TriMesh m({"a", "b", "c", "d"}, {{{"a", "b", "c"}}, {{"a", "d", "b"}}, {{"b", "d", "c"}}, {{"c", "d", "a"}}});
  const double s = 1.0 / std::sqrt(2.0);
  return {m, {{"a", {1, 0, -s}}, {"b", {-1, 0, -s}}, {"c", {0, 1, s}}, {"d", {0, -1, s}}}};
}

inline polyflex::TriMesh octahedron_topology() {
  // equator e0..e3, apices n (north) and s (south), outward orientation
  return polyflex::TriMesh({"e0", "e1", "e2", "e3", "n", "s"},
                           {{{"n", "e0", "e1"}}, {{"n", "e1", "e2"}}, {{"n", "e2", "e3"}}, {{"n", "e3", "e0"}},
                            {{"s", "e1", "e0"}}, {{"s", "e2", "e1"}}, {{"s", "e3", "e2"}}, {{"s", "e0", "e3"}}});
}

inline polyflex::Realization regular_octahedron() {
  return {octahedron_topology(),
          {{"e0", {1, 0, 0}}, {"e1", {0, 1, 0}}, {"e2", {-1, 0, 0}}, {"e3", {0, -1, 0}}, {"n", {0, 0, 1}}, {"s", {0, 0, -1}}}};
}

// Unit cube split into 12 triangles, outward orientation.
inline polyflex::Realization cube() {
  std::vector<polyflex::Label> v;
  polyflex::Configuration c;
  for (int i = 0; i < 8; ++i) {
    const std::string l = "v" + std::to_string(i);
    v.push_back(l);
    c[l] = Point3(i & 1, (i >> 1) & 1, (i >> 2) & 1);
  }
  auto q = [](int a, int b, int cc, int d, std::vector<polyflex::Face>& f) {
    auto L = [](int i) { return "v" + std::to_string(i); };
    f.push_back({L(a), L(b), L(cc)});
    f.push_back({L(a), L(cc), L(d)});
  };
  std::vector<polyflex::Face> f;
  q(0, 2, 3, 1, f);  // z = 0
  q(4, 5, 7, 6, f);  // z = 1
  q(0, 1, 5, 4, f);  // y = 0
  q(2, 6, 7, 3, f);  // y = 1
  q(0, 4, 6, 2, f);  // x = 0
  q(1, 3, 7, 5, f);  // x = 1
  return {polyflex::TriMesh(v, f), c};
}

}  // namespace oracle
