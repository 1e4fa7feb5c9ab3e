// 3D primitives shared by every other part of polyflex: points, lines,
// planes, rigid isometries, trilateration and tetrahedron volumes.
#pragma once

#include <Eigen/Dense>

#include <stdexcept>
#include <string>
#include <vector>

namespace polyflex {

using Vec3 = Eigen::Vector3d;
using Point3 = Eigen::Vector3d;

/// Base class for everything polyflex throws on invalid geometry.
class GeometryError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Tolerances are passed explicitly; nothing in the library reads a global.
/// Length tolerances are relative to the scale of the object they check.
struct Tolerance {
  double eps_len = 1e-9;    // relative length tolerance
  double eps_rank = 1e-8;   // singular-value cutoff, relative to the largest
  double eps_geom = 1e-12;  // intersection predicate slack, relative

  void validate() const;
};

struct Line3 {
  Point3 anchor = Point3::Zero();
  Vec3 direction = Vec3::UnitZ();

  /// Normalizes `dir`; throws if it is (near) zero.
  static Line3 through(const Point3& anchor, const Vec3& dir);
  double distance_to(const Point3& p) const;
};

struct Plane3 {
  Point3 point = Point3::Zero();
  Vec3 normal = Vec3::UnitZ();

  static Plane3 from_point_normal(const Point3& point, const Vec3& normal);
  double signed_distance(const Point3& p) const { return normal.dot(p - point); }
};

/// x -> rotation * x + translation, with rotation orthogonal (det +-1).
class Isometry3 {
 public:
  Isometry3() = default;
  Isometry3(const Eigen::Matrix3d& rotation, const Vec3& translation);

  static Isometry3 identity() { return {}; }

  Point3 apply(const Point3& p) const { return rotation_ * p + translation_; }
  Vec3 apply_linear(const Vec3& v) const { return rotation_ * v; }
  Point3 operator()(const Point3& p) const { return apply(p); }

  /// (a * b)(x) = a(b(x))
  Isometry3 operator*(const Isometry3& other) const;
  Isometry3 inverse() const;

  const Eigen::Matrix3d& rotation() const { return rotation_; }
  const Vec3& translation() const { return translation_; }
  bool is_proper() const { return rotation_.determinant() > 0.0; }

  /// Max deviation of R^T R from I.
  double orthogonality_error() const;

 private:
  Eigen::Matrix3d rotation_ = Eigen::Matrix3d::Identity();
  Vec3 translation_ = Vec3::Zero();
};

/// Rotation by pi about `axis`.
Isometry3 half_rotation(const Line3& axis);

/// Mirror in `plane`; det of the linear part is -1.
Isometry3 reflect_in_plane(const Plane3& plane);

/// Points q with |q - p_i| = d_i. Returns 0, 1 or 2 points; with two, they
/// are mirror images across the plane of the base points. The first returned
/// point lies on the side of (p2 - p1) x (p3 - p1).
std::vector<Point3> trilaterate(const Point3& p1, const Point3& p2, const Point3& p3, double d1,
                                double d2, double d3, const Tolerance& tol = {});

/// det(b - a, c - a, d - a) / 6
double signed_volume_tetra(const Point3& a, const Point3& b, const Point3& c, const Point3& d);

/// Largest pairwise distance in a point set (0 for fewer than two points).
double max_pairwise_distance(const std::vector<Point3>& pts);

/// True if the points span a line or less (relative to their own scale).
bool collinear(const Point3& a, const Point3& b, const Point3& c, double rel_eps = 1e-12);

}  // namespace polyflex
