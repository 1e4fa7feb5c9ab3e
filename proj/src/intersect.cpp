#include "polyflex/intersect.hpp"

#include <algorithm>
#include <cmath>
#include <vector>

namespace polyflex {

namespace {

int classify(double s, double slack) {
  if (s > slack) return 1;
  if (s < -slack) return -1;
  return 0;
}

struct Interval {
  double lo = 0.0, hi = 0.0;
  Point3 p_lo, p_hi;
};

// Where triangle t meets the other triangle's plane, as an interval along dir.
Interval plane_interval(const Triangle& t, const std::array<double, 3>& s,
                        const std::array<int, 3>& sign, const Vec3& dir) {
  std::vector<Point3> pts;
  for (int i = 0; i < 3; ++i) {
    const int j = (i + 1) % 3;
    if (sign[i] == 0) pts.push_back(t[i]);
    if (sign[i] * sign[j] < 0) {
      const double u = s[i] / (s[i] - s[j]);
      pts.push_back(t[i] + u * (t[j] - t[i]));
    }
  }
  Interval iv;
  iv.lo = iv.hi = dir.dot(pts.front());
  iv.p_lo = iv.p_hi = pts.front();
  for (const Point3& p : pts) {
    const double v = dir.dot(p);
    if (v < iv.lo) iv.lo = v, iv.p_lo = p;
    if (v > iv.hi) iv.hi = v, iv.p_hi = p;
  }
  return iv;
}

using P2 = Eigen::Vector2d;

double cross2(const P2& a, const P2& b) { return a.x() * b.y() - a.y() * b.x(); }

// Clip polygon `poly` against the convex ccw polygon `clip`.
std::vector<P2> clip_polygon(std::vector<P2> poly, const std::vector<P2>& clip) {
  for (std::size_t e = 0; e < clip.size() && !poly.empty(); ++e) {
    const P2& a = clip[e];
    const P2& b = clip[(e + 1) % clip.size()];
    std::vector<P2> out;
    for (std::size_t i = 0; i < poly.size(); ++i) {
      const P2& p = poly[i];
      const P2& q = poly[(i + 1) % poly.size()];
      const double sp = cross2(b - a, p - a);
      const double sq = cross2(b - a, q - a);
      if (sp >= 0) out.push_back(p);
      if ((sp >= 0) != (sq >= 0)) out.push_back(p + (sp / (sp - sq)) * (q - p));
    }
    poly = std::move(out);
  }
  return poly;
}

std::optional<Segment3> coplanar_intersection(const Triangle& t1, const Triangle& t2,
                                              const Vec3& normal, double slack) {
  int drop = 0;
  normal.cwiseAbs().maxCoeff(&drop);
  const int ia = (drop + 1) % 3, ib = (drop + 2) % 3;
  auto to2 = [&](const Point3& p) { return P2(p[ia], p[ib]); };

  std::vector<P2> a = {to2(t1[0]), to2(t1[1]), to2(t1[2])};
  std::vector<P2> b = {to2(t2[0]), to2(t2[1]), to2(t2[2])};
  if (cross2(a[1] - a[0], a[2] - a[0]) < 0) std::swap(a[1], a[2]);
  if (cross2(b[1] - b[0], b[2] - b[0]) < 0) std::swap(b[1], b[2]);

  const std::vector<P2> poly = clip_polygon(a, b);
  if (poly.size() < 3) return std::nullopt;
  double area = 0.0;
  for (std::size_t i = 0; i < poly.size(); ++i) area += cross2(poly[i], poly[(i + 1) % poly.size()]);
  area = 0.5 * std::abs(area);

  std::size_t bi = 0, bj = 0;
  double diam = 0.0;
  for (std::size_t i = 0; i < poly.size(); ++i)
    for (std::size_t j = i + 1; j < poly.size(); ++j)
      if ((poly[i] - poly[j]).norm() > diam) diam = (poly[i] - poly[j]).norm(), bi = i, bj = j;
  if (diam <= slack || area <= slack * diam) return std::nullopt;

  // Lift the witness back onto t1's plane.
  auto lift = [&](const P2& q) {
    Point3 p = Point3::Zero();
    p[ia] = q.x();
    p[ib] = q.y();
    p[drop] = (normal.dot(t1[0]) - normal[ia] * q.x() - normal[ib] * q.y()) / normal[drop];
    return p;
  };
  return Segment3{lift(poly[bi]), lift(poly[bj])};
}

}  // namespace

std::optional<Segment3> triangle_intersection(const Triangle& t1, const Triangle& t2, double slack) {
  const Vec3 n1raw = (t1[1] - t1[0]).cross(t1[2] - t1[0]);
  const Vec3 n2raw = (t2[1] - t2[0]).cross(t2[2] - t2[0]);
  if (n1raw.norm() == 0.0 || n2raw.norm() == 0.0) return std::nullopt;
  const Vec3 n1 = n1raw.normalized();
  const Vec3 n2 = n2raw.normalized();

  std::array<double, 3> s2{}, s1{};
  std::array<int, 3> c2{}, c1{};
  for (int k = 0; k < 3; ++k) {
    s2[k] = n1.dot(t2[k] - t1[0]);
    s1[k] = n2.dot(t1[k] - t2[0]);
    c2[k] = classify(s2[k], slack);
    c1[k] = classify(s1[k], slack);
  }
  auto one_side = [](const std::array<int, 3>& c) {
    return (c[0] > 0 && c[1] > 0 && c[2] > 0) || (c[0] < 0 && c[1] < 0 && c[2] < 0);
  };
  if (one_side(c1) || one_side(c2)) return std::nullopt;

  const bool coplanar = (c1[0] == 0 && c1[1] == 0 && c1[2] == 0) ||
                        (c2[0] == 0 && c2[1] == 0 && c2[2] == 0);
  const Vec3 dir_raw = n1.cross(n2);
  if (coplanar || dir_raw.norm() < 1e-14) return coplanar_intersection(t1, t2, n1, slack);

  const Vec3 dir = dir_raw.normalized();
  const Interval a = plane_interval(t1, s1, c1, dir);
  const Interval b = plane_interval(t2, s2, c2, dir);
  const double lo = std::max(a.lo, b.lo);
  const double hi = std::min(a.hi, b.hi);
  if (hi - lo <= slack) return std::nullopt;
  return Segment3{a.lo >= b.lo ? a.p_lo : b.p_lo, a.hi <= b.hi ? a.p_hi : b.p_hi};
}

double point_triangle_distance(const Point3& p, const Triangle& t) {
  // Closest point on triangle by Voronoi regions.
  const Point3 &a = t[0], &b = t[1], &c = t[2];
  const Vec3 ab = b - a, ac = c - a, ap = p - a;
  const double d1 = ab.dot(ap), d2 = ac.dot(ap);
  if (d1 <= 0 && d2 <= 0) return (p - a).norm();
  const Vec3 bp = p - b;
  const double d3 = ab.dot(bp), d4 = ac.dot(bp);
  if (d3 >= 0 && d4 <= d3) return (p - b).norm();
  const double vc = d1 * d4 - d3 * d2;
  if (vc <= 0 && d1 >= 0 && d3 <= 0) return (p - (a + (d1 / (d1 - d3)) * ab)).norm();
  const Vec3 cp = p - c;
  const double d5 = ab.dot(cp), d6 = ac.dot(cp);
  if (d6 >= 0 && d5 <= d6) return (p - c).norm();
  const double vb = d5 * d2 - d1 * d6;
  if (vb <= 0 && d2 >= 0 && d6 <= 0) return (p - (a + (d2 / (d2 - d6)) * ac)).norm();
  const double va = d3 * d6 - d5 * d4;
  if (va <= 0 && (d4 - d3) >= 0 && (d5 - d6) >= 0)
    return (p - (b + ((d4 - d3) / ((d4 - d3) + (d5 - d6))) * (c - b))).norm();
  const double denom = 1.0 / (va + vb + vc);
  return (p - (a + ab * (vb * denom) + ac * (vc * denom))).norm();
}

double segment_segment_distance(const Point3& p0, const Point3& p1, const Point3& q0,
                                const Point3& q1) {
  const Vec3 d1 = p1 - p0, d2 = q1 - q0, r = p0 - q0;
  const double a = d1.squaredNorm(), e = d2.squaredNorm(), f = d2.dot(r);
  double s = 0.0, t = 0.0;
  if (a <= 0.0 && e <= 0.0) return r.norm();
  if (a <= 0.0) {
    t = std::clamp(f / e, 0.0, 1.0);
  } else {
    const double c = d1.dot(r);
    if (e <= 0.0) {
      s = std::clamp(-c / a, 0.0, 1.0);
    } else {
      const double b = d1.dot(d2);
      const double denom = a * e - b * b;
      s = denom > 0.0 ? std::clamp((b * f - c * e) / denom, 0.0, 1.0) : 0.0;
      t = (b * s + f) / e;
      if (t < 0.0) {
        t = 0.0;
        s = std::clamp(-c / a, 0.0, 1.0);
      } else if (t > 1.0) {
        t = 1.0;
        s = std::clamp((b - c) / a, 0.0, 1.0);
      }
    }
  }
  return ((p0 + s * d1) - (q0 + t * d2)).norm();
}

double triangle_distance(const Triangle& t1, const Triangle& t2) {
  if (triangle_intersection(t1, t2, 0.0)) return 0.0;
  double best = std::numeric_limits<double>::infinity();
  for (int i = 0; i < 3; ++i) {
    best = std::min(best, point_triangle_distance(t1[i], t2));
    best = std::min(best, point_triangle_distance(t2[i], t1));
    for (int j = 0; j < 3; ++j)
      best = std::min(best, segment_segment_distance(t1[i], t1[(i + 1) % 3], t2[j], t2[(j + 1) % 3]));
  }
  return best;
}

}  // namespace polyflex
