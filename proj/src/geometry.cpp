#include "polyflex/geometry.hpp"

#include <algorithm>
#include <cmath>

namespace polyflex {

void Tolerance::validate() const {
  if (!(eps_len > 0.0) || !(eps_rank > 0.0) || !(eps_geom > 0.0))
    throw std::invalid_argument("tolerances must be positive");
}

Line3 Line3::through(const Point3& anchor, const Vec3& dir) {
  const double n = dir.norm();
  if (!(n > 0.0) || !std::isfinite(n)) throw GeometryError("line direction is zero");
  return Line3{anchor, dir / n};
}

double Line3::distance_to(const Point3& p) const {
  const Vec3 d = p - anchor;
  return (d - d.dot(direction) * direction).norm();
}

Plane3 Plane3::from_point_normal(const Point3& point, const Vec3& normal) {
  const double n = normal.norm();
  if (!(n > 0.0) || !std::isfinite(n)) throw GeometryError("plane normal is zero");
  return Plane3{point, normal / n};
}

Isometry3::Isometry3(const Eigen::Matrix3d& rotation, const Vec3& translation)
    : rotation_(rotation), translation_(translation) {}

Isometry3 Isometry3::operator*(const Isometry3& other) const {
  return {rotation_ * other.rotation_, rotation_ * other.translation_ + translation_};
}

Isometry3 Isometry3::inverse() const {
  const Eigen::Matrix3d rt = rotation_.transpose();
  return {rt, -(rt * translation_)};
}

double Isometry3::orthogonality_error() const {
  return (rotation_.transpose() * rotation_ - Eigen::Matrix3d::Identity()).cwiseAbs().maxCoeff();
}

Isometry3 half_rotation(const Line3& axis) {
  // R = 2 u u^T - I fixes the axis and negates its orthogonal complement.
  const Vec3& u = axis.direction;
  const Eigen::Matrix3d r = 2.0 * u * u.transpose() - Eigen::Matrix3d::Identity();
  return {r, axis.anchor - r * axis.anchor};
}

Isometry3 reflect_in_plane(const Plane3& plane) {
  const Vec3& n = plane.normal;
  const Eigen::Matrix3d r = Eigen::Matrix3d::Identity() - 2.0 * n * n.transpose();
  return {r, plane.point - r * plane.point};
}

std::vector<Point3> trilaterate(const Point3& p1, const Point3& p2, const Point3& p3, double d1,
                                double d2, double d3, const Tolerance& tol) {
  if (d1 < 0.0 || d2 < 0.0 || d3 < 0.0) throw GeometryError("trilaterate: negative distance");
  if (collinear(p1, p2, p3)) throw GeometryError("trilaterate: collinear base points");

  const Vec3 ex = (p2 - p1).normalized();
  const double i = ex.dot(p3 - p1);
  const Vec3 ey = (p3 - p1 - i * ex).normalized();
  const Vec3 ez = ex.cross(ey);
  const double d = (p2 - p1).norm();
  const double j = ey.dot(p3 - p1);

  const double x = (d1 * d1 - d2 * d2 + d * d) / (2.0 * d);
  const double y = (d1 * d1 - d3 * d3 + i * i + j * j) / (2.0 * j) - (i / j) * x;
  const double z2 = d1 * d1 - x * x - y * y;

  const double scale = std::max({d, (p3 - p1).norm(), (p3 - p2).norm(), d1, d2, d3});
  const double slack = tol.eps_len * scale * scale;
  const Point3 base = p1 + x * ex + y * ey;
  if (z2 < -slack) return {};
  if (z2 <= slack) return {base};
  const double z = std::sqrt(z2);
  return {base + z * ez, base - z * ez};
}

double signed_volume_tetra(const Point3& a, const Point3& b, const Point3& c, const Point3& d) {
  Eigen::Matrix3d m;
  m.col(0) = b - a;
  m.col(1) = c - a;
  m.col(2) = d - a;
  return m.determinant() / 6.0;
}

double max_pairwise_distance(const std::vector<Point3>& pts) {
  double best = 0.0;
  for (std::size_t i = 0; i < pts.size(); ++i)
    for (std::size_t j = i + 1; j < pts.size(); ++j) best = std::max(best, (pts[i] - pts[j]).norm());
  return best;
}

bool collinear(const Point3& a, const Point3& b, const Point3& c, double rel_eps) {
  const double s = std::max({(b - a).norm(), (c - a).norm(), (c - b).norm()});
  if (s == 0.0) return true;
  return (b - a).cross(c - a).norm() <= rel_eps * s * s;
}

}  // namespace polyflex
