// Randomized search over dodecahedron parameters for a larger range of motion.
#pragma once

#include <cstdint>
#include <functional>
#include <string>

#include "polyflex/constructions.hpp"

namespace polyflex {

struct EvalResult {
  bool feasible = false;
  double range = 0.0;  // total variation of the driving dihedral, radians
  double min_clearance = 0.0;
  double min_triangle_quality = 0.0;  // over the whole trajectory
  std::string stage;                  // failing stage, empty when feasible
  std::string message;
};

struct EvalOptions {
  StepControl step;
  BuildOptions build;
  Tolerance tol;
};

/// Builds the dodecahedron and measures its range of motion. Never throws;
/// failures come back with feasible = false and a stage tag.
EvalResult evaluate(const DodecParams& p, const EvalOptions& opt = {});

struct SearchOptions {
  int budget = 100;  // evaluations after the seed
  std::uint64_t seed = 1;
  double quality_floor = 1e-3;
  double sigma = 0.05;  // log-normal step width
  EvalOptions eval;
  /// Called after every trial (trial index, params, result, accepted).
  std::function<void(int, const DodecParams&, const EvalResult&, bool)> on_trial;
};

struct SearchResult {
  DodecParams params;
  EvalResult result;
  int accepted = 0;
};

/// Perturbs one of l1, l2, l4, l5, h1, h2, h3 at a time by a log-normal
/// factor (l3 stays fixed) and keeps the change when the range grows, or
/// stays equal with a larger clearance. Throws GeometryError when the budget
/// is not positive or nothing feasible above the floor was found.
SearchResult search(const DodecParams& seed_params, const SearchOptions& opt = {});

}  // namespace polyflex
