#include "polyflex/flex.hpp"

#include <algorithm>
#include <cmath>
#include <set>

namespace polyflex {

namespace {

bool spans_plane(const Point3& o, const Point3& a, const Point3& p, double scale) {
  if ((a - o).norm() <= 1e-9 * scale) return false;
  return (a - o).cross(p - o).norm() > 1e-9 * scale * scale;
}

GaugeSpec choose_gauge(const std::vector<Label>& verts, const Configuration& config) {
  const double scale = configuration_scale(config);
  auto has = [&](const Label& v) { return config.count(v) > 0; };
  if (has("B'") && has("A'") && has("A") &&
      spans_plane(config.at("B'"), config.at("A'"), config.at("A"), scale))
    return {"B'", "A'", "A"};
  for (std::size_t i = 0; i < verts.size(); ++i)
    for (std::size_t j = 0; j < verts.size(); ++j)
      for (std::size_t k = 0; k < verts.size(); ++k) {
        if (i == j || j == k || i == k) continue;
        if (spans_plane(config.at(verts[i]), config.at(verts[j]), config.at(verts[k]), scale))
          return {verts[i], verts[j], verts[k]};
      }
  throw GeometryError("span deficient: configuration is collinear");
}

// Rigid motion taking the gauge vertices to their pinned positions.
Isometry3 gauge_frame(const GaugeSpec& g, const Configuration& config) {
  const Point3& o = config.at(g.origin);
  const Vec3 ex = (config.at(g.axis) - o).normalized();
  Vec3 ez = config.at(g.plane) - o;
  ez -= ez.dot(ex) * ex;
  ez.normalize();
  const Vec3 ey = ez.cross(ex);
  Eigen::Matrix3d r;
  r.row(0) = ex.transpose();
  r.row(1) = ey.transpose();
  r.row(2) = ez.transpose();
  return Isometry3(r, -(r * o));
}

bool spans_space(const Configuration& config) {
  if (config.size() < 4) return false;
  Point3 c = Point3::Zero();
  for (const auto& [l, p] : config) c += p;
  c /= static_cast<double>(config.size());
  Eigen::MatrixXd m(3, config.size());
  std::size_t i = 0;
  for (const auto& [l, p] : config) m.col(i++) = p - c;
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(m);
  const auto& s = svd.singularValues();
  return s(0) > 0.0 && s(2) > 1e-9 * s(0);
}

}  // namespace

Linkage Linkage::from_realization(const TriMesh& mesh, const Configuration& config) {
  check_configuration(mesh, config);
  Linkage l;
  l.vertices = mesh.vertices();
  l.edges = mesh.edges();
  for (const Edge& e : l.edges) l.lengths.push_back((config.at(e.a) - config.at(e.b)).norm());
  l.gauge = choose_gauge(l.vertices, config);
  return l;
}

Linkage Linkage::from_table(const TriMesh& mesh, const EdgeLengthTable& table,
                            const Configuration& config) {
  check_configuration(mesh, config);
  Linkage l;
  l.vertices = mesh.vertices();
  l.edges = mesh.edges();
  for (const Edge& e : l.edges) {
    auto it = table.find(e);
    if (it == table.end()) throw GeometryError("no target length for edge " + e.name());
    if (!(it->second > 0.0)) throw GeometryError("non-positive target length for edge " + e.name());
    l.lengths.push_back(it->second);
  }
  l.gauge = choose_gauge(l.vertices, config);
  return l;
}

std::size_t Linkage::index_of(const Label& v) const {
  auto it = std::find(vertices.begin(), vertices.end(), v);
  if (it == vertices.end()) throw GeometryError("unknown vertex " + v);
  return static_cast<std::size_t>(it - vertices.begin());
}

Eigen::VectorXd residual(const Linkage& link, const Configuration& config) {
  Eigen::VectorXd r(link.edges.size());
  for (std::size_t i = 0; i < link.edges.size(); ++i) {
    const Edge& e = link.edges[i];
    r(i) = (config.at(e.a) - config.at(e.b)).squaredNorm() - link.lengths[i] * link.lengths[i];
  }
  return r;
}

double max_length_error(const Linkage& link, const Configuration& config) {
  double m = 0.0;
  for (std::size_t i = 0; i < link.edges.size(); ++i) {
    const Edge& e = link.edges[i];
    m = std::max(m, std::abs((config.at(e.a) - config.at(e.b)).norm() - link.lengths[i]));
  }
  return m;
}

Eigen::MatrixXd rigidity_matrix(const Linkage& link, const Configuration& config) {
  Eigen::MatrixXd m = Eigen::MatrixXd::Zero(link.edges.size(), 3 * link.vertices.size());
  for (std::size_t i = 0; i < link.edges.size(); ++i) {
    const Edge& e = link.edges[i];
    const Vec3 d = config.at(e.a) - config.at(e.b);
    m.block<1, 3>(i, 3 * link.index_of(e.a)) = d.transpose();
    m.block<1, 3>(i, 3 * link.index_of(e.b)) = -d.transpose();
  }
  return m;
}

int flex_dimension(const Linkage& link, const Configuration& config, const Tolerance& tol) {
  if (!spans_space(config)) throw GeometryError("span deficient: configuration does not span 3D");
  const Eigen::MatrixXd m = rigidity_matrix(link, config);
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(m);
  const auto& s = svd.singularValues();
  int rank = 0;
  for (Eigen::Index i = 0; i < s.size(); ++i)
    if (s(i) > tol.eps_rank * s(0)) ++rank;
  return static_cast<int>(m.cols()) - rank - 6;
}

int flex_dimension(const TriMesh& mesh, const Configuration& config, const Tolerance& tol) {
  return flex_dimension(Linkage::from_realization(mesh, config), config, tol);
}

int quad_dof_check(const Point3& a, const Point3& b, const Point3& a2, const Point3& b2,
                   const Tolerance& tol) {
  const double scale = max_pairwise_distance({a, b, a2, b2});
  if (!(scale > 0.0)) throw GeometryError("degenerate quadrilateral: coincident points");
  if (collinear(a, b, a2) && collinear(a, b, b2) && collinear(a, a2, b2))
    throw GeometryError("degenerate quadrilateral: collinear points");
  Linkage l;
  l.vertices = {"a", "b", "a2", "b2"};
  l.edges = {Edge::make("a", "b"), Edge::make("b", "a2"), Edge::make("a2", "b2"), Edge::make("b2", "a")};
  l.lengths = {1, 1, 1, 1};
  const Configuration c = {{"a", a}, {"b", b}, {"a2", a2}, {"b2", b2}};
  const Eigen::MatrixXd m = rigidity_matrix(l, c);
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(m);
  const auto& s = svd.singularValues();
  int rank = 0;
  for (Eigen::Index i = 0; i < s.size(); ++i)
    if (s(i) > tol.eps_rank * s(0)) ++rank;
  return 12 - rank - 6;
}

DrivingSelector DrivingSelector::dihedral_at(const Label& u, const Label& v) {
  return {Kind::dihedral, Edge::make(u, v)};
}

DrivingSelector DrivingSelector::distance_between(const Label& u, const Label& v) {
  return {Kind::distance, Edge::make(u, v)};
}

std::string DrivingSelector::name() const {
  return std::string(kind == Kind::dihedral ? "dihedral:" : "distance:") + edge.name();
}

DrivingSelector DrivingSelector::parse(const std::string& name) {
  const auto colon = name.find(':');
  const auto dash = name.find('-', colon == std::string::npos ? 0 : colon + 1);
  if (colon == std::string::npos || dash == std::string::npos)
    throw GeometryError("bad driving selector '" + name + "' (expected dihedral:U-V or distance:U-V)");
  const std::string kind = name.substr(0, colon);
  const Label u = name.substr(colon + 1, dash - colon - 1);
  const Label v = name.substr(dash + 1);
  if (kind == "dihedral") return dihedral_at(u, v);
  if (kind == "distance") return distance_between(u, v);
  throw GeometryError("bad driving selector kind '" + kind + "'");
}

double driving_value(const TriMesh& mesh, const Configuration& config, const DrivingSelector& sel) {
  if (sel.kind == DrivingSelector::Kind::distance)
    return (config.at(sel.edge.a) - config.at(sel.edge.b)).norm();
  return dihedral(mesh, config, sel.edge).angle;
}

const char* to_string(StopReason r) {
  switch (r) {
    case StopReason::corrector_failure: return "corrector_failure";
    case StopReason::degenerate_triangle: return "degenerate_triangle";
    case StopReason::self_intersection: return "self_intersection";
    case StopReason::loop_closed: return "loop_closed";
    case StopReason::max_samples: return "max_samples";
  }
  return "unknown";
}

std::vector<std::string> FlexTrajectory::sign_changing_edges() const {
  std::map<std::string, std::set<FoldSign>> seen;
  for (const FlexSample& s : samples)
    for (const auto& [edge, sign] : s.folds)
      if (sign != FoldSign::flat) seen[edge].insert(sign);
  std::vector<std::string> out;
  for (const auto& [edge, signs] : seen)
    if (signs.size() > 1) out.push_back(edge);
  return out;
}

FlexStepper::FlexStepper(const TriMesh& mesh, const Configuration& start, const StepControl& step,
                         const Tolerance& tol)
    : mesh_(mesh), link_(Linkage::from_realization(mesh, start)), step_(step), tol_(tol) {
  scale_ = configuration_scale(start);
  const Isometry3 frame = gauge_frame(link_.gauge, start);
  const std::size_t n = link_.vertices.size();
  pinned_ = Eigen::VectorXd::Zero(3 * n);
  slot_.assign(3 * n, -1);
  const std::size_t io = link_.index_of(link_.gauge.origin);
  const std::size_t ia = link_.index_of(link_.gauge.axis);
  const std::size_t ip = link_.index_of(link_.gauge.plane);
  std::vector<Eigen::Index> free;
  for (std::size_t i = 0; i < n; ++i) {
    const Point3 p = frame(start.at(link_.vertices[i]));
    for (int k = 0; k < 3; ++k) {
      const bool pin = i == io || (i == ia && k > 0) || (i == ip && k == 1);
      pinned_(3 * i + k) = pin ? 0.0 : p(k);
      if (!pin) {
        slot_[3 * i + k] = static_cast<int>(free.size());
        free.push_back(static_cast<Eigen::Index>(3 * i + k));
      }
    }
  }
  u_.resize(static_cast<Eigen::Index>(free.size()));
  for (std::size_t j = 0; j < free.size(); ++j) u_(j) = pinned_(free[j]);
  tangent_ = null_vector(u_);
  Eigen::Index big = 0;
  tangent_.cwiseAbs().maxCoeff(&big);
  if (tangent_(big) < 0) tangent_ = -tangent_;
}

Configuration FlexStepper::to_config(const Eigen::VectorXd& u) const {
  Configuration c;
  for (std::size_t i = 0; i < link_.vertices.size(); ++i) {
    Point3 p;
    for (int k = 0; k < 3; ++k) {
      const int s = slot_[3 * i + k];
      p(k) = s >= 0 ? u(s) : pinned_(3 * i + k);
    }
    c[link_.vertices[i]] = p;
  }
  return c;
}

Configuration FlexStepper::configuration() const { return to_config(u_); }

Eigen::VectorXd FlexStepper::constraints(const Eigen::VectorXd& u) const {
  return residual(link_, to_config(u));
}

Eigen::MatrixXd FlexStepper::jacobian(const Eigen::VectorXd& u) const {
  const Eigen::MatrixXd full = rigidity_matrix(link_, to_config(u));
  Eigen::MatrixXd j = Eigen::MatrixXd::Zero(full.rows(), u.size());
  for (std::size_t c = 0; c < slot_.size(); ++c)
    if (slot_[c] >= 0) j.col(slot_[c]) = 2.0 * full.col(static_cast<Eigen::Index>(c));
  return j;
}

Eigen::VectorXd FlexStepper::null_vector(const Eigen::VectorXd& u) const {
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(jacobian(u), Eigen::ComputeFullV);
  return svd.matrixV().col(svd.matrixV().cols() - 1).normalized();
}

void FlexStepper::set_state(const Eigen::VectorXd& u, const Eigen::VectorXd& tangent) {
  u_ = u;
  tangent_ = tangent;
}

bool FlexStepper::step(double h) {
  const Eigen::VectorXd predictor = u_ + h * tangent_;
  Eigen::VectorXd u = predictor;
  const Eigen::Index m = static_cast<Eigen::Index>(link_.edges.size());
  const double target = 1e-13 * scale_;
  bool converged = false;

  for (int it = 0; it < step_.max_newton; ++it) {
    Eigen::VectorXd rhs(m + 1);
    rhs.head(m) = -constraints(u);
    rhs(m) = -tangent_.dot(u - predictor);
    Eigen::MatrixXd a(m + 1, u.size());
    a.topRows(m) = jacobian(u);
    a.row(m) = tangent_.transpose();
    const Eigen::VectorXd delta = a.colPivHouseholderQr().solve(rhs);
    if (!delta.allFinite()) return false;

    // Backtrack until the residual drops.
    double lambda = 1.0;
    const double before = rhs.norm();
    Eigen::VectorXd trial = u + delta;
    for (int k = 0; k < 8; ++k) {
      Eigen::VectorXd r(m + 1);
      r.head(m) = constraints(trial);
      r(m) = tangent_.dot(trial - predictor);
      if (r.norm() < before || before < 1e-14 * scale_ * scale_) break;
      lambda *= 0.5;
      trial = u + lambda * delta;
    }
    u = trial;
    if (max_length_error(link_, to_config(u)) < target && delta.norm() < 1e-10 * scale_) {
      converged = true;
      break;
    }
  }
  const double err = max_length_error(link_, to_config(u));
  if (!converged && err >= tol_.eps_len * scale_ * 1e-2) return false;
  if ((u - predictor).norm() > std::abs(h)) return false;

  Eigen::VectorXd t = null_vector(u);
  if (t.dot(tangent_) < 0) t = -t;
  u_ = u;
  tangent_ = t;
  return true;
}

namespace {

FlexSample make_sample(const TriMesh& mesh, const Linkage& link, const Configuration& c,
                       const DrivingSelector& driving, double arc, const Tolerance& tol) {
  FlexSample s;
  s.s = driving_value(mesh, c, driving);
  s.arc = arc;
  s.config = c;
  s.max_residual = max_length_error(link, c);
  s.volume = signed_volume(mesh, c);
  s.intersections = self_intersections(mesh, c, tol).size();
  s.folds = fold_signs(mesh, c, tol);
  return s;
}

}  // namespace

FlexTrajectory continue_flex(const TriMesh& mesh, const Configuration& start,
                             const DrivingSelector& driving, const StepControl& step,
                             const Tolerance& tol) {
  tol.validate();
  if (!validate(mesh).is_sphere()) throw GeometryError("continuation needs a closed oriented surface");
  if (flex_dimension(mesh, start, tol) != 1) throw GeometryError("not flexible");

  FlexStepper stepper(mesh, start, step, tol);
  const Linkage& link = stepper.linkage();
  const double scale = stepper.scale();
  const Eigen::VectorXd u0 = stepper.coordinates();
  const Eigen::VectorXd t0 = stepper.tangent();

  FlexTrajectory traj;
  traj.driving = driving;
  const FlexSample first = make_sample(mesh, link, stepper.configuration(), driving, 0.0, tol);
  traj.start_embedded = first.intersections == 0;
  const bool guard = step.stop_on_intersection && traj.start_embedded;

  std::vector<FlexSample> sides[2];
  StopReason reasons[2] = {StopReason::max_samples, StopReason::max_samples};
  bool closed = false;

  for (int side = 0; side < 2 && !closed; ++side) {
    const double dir = side == 0 ? 1.0 : -1.0;
    stepper.set_state(u0, t0);
    double h = step.initial_step * scale;
    const double h_min = step.min_step_ratio * step.initial_step * scale;
    double arc = 0.0;
    double s_prev = first.s;
    StopReason last = StopReason::corrector_failure;

    while (static_cast<int>(sides[side].size()) < step.max_samples) {
      const Eigen::VectorXd u_prev = stepper.coordinates();
      const Eigen::VectorXd t_prev = stepper.tangent();
      bool accepted = false;
      if (stepper.step(dir * h)) {
        const Configuration c = stepper.configuration();
        const double s = driving_value(mesh, c, driving);
        if (min_triangle_quality(mesh, c) < step.quality_floor) {
          last = StopReason::degenerate_triangle;
        } else if (guard && !self_intersections(mesh, c, tol).empty()) {
          last = StopReason::self_intersection;
        } else if (std::abs(s - s_prev) > step.max_driving_step && h > h_min) {
          last = StopReason::corrector_failure;
        } else {
          arc += (stepper.coordinates() - u_prev).norm();
          sides[side].push_back(make_sample(mesh, link, c, driving, dir * arc, tol));
          s_prev = s;
          accepted = true;
          if (sides[side].size() > 4 && (stepper.coordinates() - u0).norm() < 0.5 * h) {
            closed = true;
            reasons[side] = StopReason::loop_closed;
            break;
          }
          h = std::min(1.5 * h, step.max_step * scale);
        }
      } else {
        last = StopReason::corrector_failure;
      }
      if (!accepted) {
        stepper.set_state(u_prev, t_prev);
        h *= 0.5;
        if (h < h_min) {
          reasons[side] = last;
          break;
        }
      }
    }
  }
  if (sides[0].empty() && sides[1].empty() && reasons[0] == StopReason::corrector_failure)
    throw GeometryError("corrector failed at the start configuration");

  traj.samples.assign(sides[1].rbegin(), sides[1].rend());
  traj.start_index = traj.samples.size();
  traj.samples.push_back(first);
  traj.samples.insert(traj.samples.end(), sides[0].begin(), sides[0].end());
  traj.stop_forward = reasons[0];
  traj.stop_backward = closed ? StopReason::loop_closed : reasons[1];
  return traj;
}

RangeOfMotion range_of_motion(const FlexTrajectory& traj) {
  if (traj.samples.empty()) throw GeometryError("empty trajectory");
  const auto& smp = traj.samples;
  if (smp[traj.start_index].intersections != 0)
    throw GeometryError("start configuration is not embedded");
  std::size_t lo = traj.start_index, hi = traj.start_index;
  while (lo > 0 && smp[lo - 1].intersections == 0) --lo;
  while (hi + 1 < smp.size() && smp[hi + 1].intersections == 0) ++hi;

  RangeOfMotion r;
  r.lo = r.hi = smp[lo].s;
  for (std::size_t i = lo; i <= hi; ++i) {
    r.lo = std::min(r.lo, smp[i].s);
    r.hi = std::max(r.hi, smp[i].s);
    if (i > lo) r.total_variation += std::abs(smp[i].s - smp[i - 1].s);
  }
  r.samples = hi - lo + 1;
  r.stop_backward = lo == 0 ? traj.stop_backward : StopReason::self_intersection;
  r.stop_forward = hi + 1 == smp.size() ? traj.stop_forward : StopReason::self_intersection;
  return r;
}

RangeOfMotion range_of_motion(const TriMesh& mesh, const Configuration& start,
                              const DrivingSelector& driving, const StepControl& step,
                              const Tolerance& tol) {
  return range_of_motion(continue_flex(mesh, start, driving, step, tol));
}

}  // namespace polyflex
