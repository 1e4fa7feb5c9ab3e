// Edge-length constraint systems: rigidity matrix, flex dimension and a
// pseudo-arclength continuation along one-parameter flexes.
#pragma once

#include <Eigen/Dense>

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "polyflex/mesh.hpp"

namespace polyflex {

using EdgeLengthTable = std::map<Edge, double>;

/// Pins `origin` at 0, puts `axis` on the +x axis and `plane` in the
/// xz-plane with z >= 0.
struct GaugeSpec {
  Label origin;
  Label axis;
  Label plane;
};

struct Linkage {
  std::vector<Label> vertices;
  std::vector<Edge> edges;
  std::vector<double> lengths;  // parallel to edges
  GaugeSpec gauge;

  /// Target lengths measured from `config`. The gauge prefers B', A', A
  /// when those labels exist and are not collinear, otherwise the first
  /// non-collinear triple in vertex order.
  static Linkage from_realization(const TriMesh& mesh, const Configuration& config);
  /// Throws unless the table covers every mesh edge with a positive length.
  static Linkage from_table(const TriMesh& mesh, const EdgeLengthTable& table,
                            const Configuration& config);

  std::size_t index_of(const Label& v) const;
};

/// |p_u - p_v|^2 - L^2 per edge.
Eigen::VectorXd residual(const Linkage& link, const Configuration& config);
/// max | |p_u - p_v| - L | over edges.
double max_length_error(const Linkage& link, const Configuration& config);

/// E x 3V, row (u,v) holds p_u - p_v in u's block and p_v - p_u in v's.
Eigen::MatrixXd rigidity_matrix(const Linkage& link, const Configuration& config);

/// Nullity of the rigidity matrix minus 6. Throws "span deficient" when
/// the points do not span 3D.
int flex_dimension(const Linkage& link, const Configuration& config, const Tolerance& tol = {});
int flex_dimension(const TriMesh& mesh, const Configuration& config, const Tolerance& tol = {});

/// Degrees of freedom of the four-bar quadrilateral a b a2 b2 in space
/// (nullity of the 4 x 12 matrix minus 6). Throws for collinear input.
int quad_dof_check(const Point3& a, const Point3& b, const Point3& a2, const Point3& b2,
                   const Tolerance& tol = {});

/// What the trajectory reports as its parameter s.
struct DrivingSelector {
  enum class Kind { dihedral, distance };
  Kind kind = Kind::dihedral;
  Edge edge;

  static DrivingSelector dihedral_at(const Label& u, const Label& v);
  static DrivingSelector distance_between(const Label& u, const Label& v);
  std::string name() const;  // "dihedral:A-B'" or "distance:A-A'"
  static DrivingSelector parse(const std::string& name);
};

double driving_value(const TriMesh& mesh, const Configuration& config, const DrivingSelector& sel);

struct StepControl {
  double initial_step = 0.01;  // arclength, relative to the configuration scale
  double max_step = 0.02;      // relative as well
  double min_step_ratio = 1e-6;
  double max_driving_step = 0.005;  // radians (or relative length) per sample
  int max_samples = 400;            // per direction
  int max_newton = 12;
  double quality_floor = 1e-3;
  bool stop_on_intersection = true;  // only honored when the start is embedded
};

enum class StopReason { corrector_failure, degenerate_triangle, self_intersection, loop_closed, max_samples };
const char* to_string(StopReason r);

struct FlexSample {
  double s = 0.0;    // driving value
  double arc = 0.0;  // signed arclength from the start, gauge coordinates
  Configuration config;
  double max_residual = 0.0;
  double volume = 0.0;
  std::size_t intersections = 0;
  std::map<std::string, FoldSign> folds;
};

struct FlexTrajectory {
  DrivingSelector driving;
  std::vector<FlexSample> samples;  // sorted by arc
  std::size_t start_index = 0;
  StopReason stop_backward = StopReason::max_samples;
  StopReason stop_forward = StopReason::max_samples;
  bool start_embedded = false;

  /// Edges whose fold sign differs between two samples (flat samples ignored).
  std::vector<std::string> sign_changing_edges() const;
};

/// A single predictor-corrector walker on the constraint curve.
class FlexStepper {
 public:
  FlexStepper(const TriMesh& mesh, const Configuration& start, const StepControl& step = {},
              const Tolerance& tol = {});

  /// Advances by signed arclength h; returns false (state unchanged) if the
  /// corrector fails.
  bool step(double h);
  Configuration configuration() const;
  double scale() const { return scale_; }
  const Linkage& linkage() const { return link_; }
  /// Unit tangent in gauge coordinates.
  const Eigen::VectorXd& tangent() const { return tangent_; }
  const Eigen::VectorXd& coordinates() const { return u_; }
  void set_state(const Eigen::VectorXd& u, const Eigen::VectorXd& tangent);

 private:
  Configuration to_config(const Eigen::VectorXd& u) const;
  Eigen::MatrixXd jacobian(const Eigen::VectorXd& u) const;
  Eigen::VectorXd constraints(const Eigen::VectorXd& u) const;
  Eigen::VectorXd null_vector(const Eigen::VectorXd& u) const;

  TriMesh mesh_;
  Linkage link_;
  StepControl step_;
  Tolerance tol_;
  double scale_ = 1.0;
  std::vector<int> slot_;  // per vertex coordinate: index into u, or -1 when pinned
  Eigen::VectorXd pinned_;  // full 3V coordinates of the gauge frame (pinned values)
  Eigen::VectorXd u_;
  Eigen::VectorXd tangent_;
};

/// Marches both ways from `start` until a stop condition. Throws
/// GeometryError("not flexible") unless flex_dimension is 1 at the start.
FlexTrajectory continue_flex(const TriMesh& mesh, const Configuration& start,
                             const DrivingSelector& driving, const StepControl& step = {},
                             const Tolerance& tol = {});

struct RangeOfMotion {
  double lo = 0.0;  // extremes of the driving value over the segment
  double hi = 0.0;
  double total_variation = 0.0;  // the range metric
  std::size_t samples = 0;
  StopReason stop_backward = StopReason::max_samples;
  StopReason stop_forward = StopReason::max_samples;
  static constexpr const char* metric = "total variation of the driving dihedral (radians)";
};

RangeOfMotion range_of_motion(const FlexTrajectory& traj);
RangeOfMotion range_of_motion(const TriMesh& mesh, const Configuration& start,
                              const DrivingSelector& driving, const StepControl& step = {},
                              const Tolerance& tol = {});

}  // namespace polyflex
