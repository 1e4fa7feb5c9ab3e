#include "polyflex/optimize.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>

namespace polyflex {

EvalResult evaluate(const DodecParams& p, const EvalOptions& opt) {
  EvalResult r;
  DodecBuild b;
  try {
    b = build_dodecahedron(p, opt.build, opt.tol);
  } catch (const StageError& e) {
    r.stage = e.stage();
    r.message = e.message();
    return r;
  } catch (const std::exception& e) {
    r.stage = "build";
    r.message = e.what();
    return r;
  }
  try {
    const FlexTrajectory traj = continue_flex(b.dodecahedron.mesh, b.dodecahedron.config,
                                              dodecahedron_driving(), opt.step, opt.tol);
    const RangeOfMotion rom = range_of_motion(traj);
    r.range = rom.total_variation;
    r.min_clearance = std::numeric_limits<double>::infinity();
    r.min_triangle_quality = std::numeric_limits<double>::infinity();
    for (const FlexSample& s : traj.samples) {
      r.min_clearance = std::min(r.min_clearance, min_face_clearance(b.dodecahedron.mesh, s.config));
      r.min_triangle_quality =
          std::min(r.min_triangle_quality, min_triangle_quality(b.dodecahedron.mesh, s.config));
    }
    r.feasible = r.range > 0.0;
    if (!r.feasible) {
      r.stage = "flex";
      r.message = "zero range of motion";
    }
  } catch (const std::exception& e) {
    r.stage = "flex";
    r.message = e.what();
  }
  return r;
}

namespace {

bool better(const EvalResult& cand, const EvalResult* best) {
  if (!best) return true;
  if (cand.range != best->range) return cand.range > best->range;
  return cand.min_clearance > best->min_clearance;
}

}  // namespace

SearchResult search(const DodecParams& seed_params, const SearchOptions& opt) {
  if (opt.budget < 1) throw GeometryError("search budget must be at least 1");
  std::mt19937_64 rng(opt.seed);
  std::uniform_int_distribution<int> pick(0, 6);
  std::normal_distribution<double> gauss(0.0, opt.sigma);

  auto admissible = [&](const EvalResult& e) {
    return e.feasible && e.min_triangle_quality >= opt.quality_floor;
  };

  DodecParams current = seed_params;
  current.base_shape.reset();
  SearchResult out;
  std::optional<EvalResult> best;
  const EvalResult first = evaluate(current, opt.eval);
  if (admissible(first)) {
    best = first;
    out.params = current;
  }
  if (opt.on_trial) opt.on_trial(0, current, first, best.has_value());

  for (int trial = 1; trial <= opt.budget; ++trial) {
    DodecParams cand = best ? out.params : current;
    double* fields[7] = {&cand.l1, &cand.l2, &cand.l4, &cand.l5, &cand.h1, &cand.h2, &cand.h3};
    *fields[pick(rng)] *= std::exp(gauss(rng));
    const EvalResult e = evaluate(cand, opt.eval);
    const bool accept = admissible(e) && better(e, best ? &*best : nullptr);
    if (accept) {
      best = e;
      out.params = cand;
      ++out.accepted;
    }
    if (opt.on_trial) opt.on_trial(trial, cand, e, accept);
  }
  if (!best)
    throw GeometryError("no feasible parameters above the quality floor within the budget (seed: " +
                        (first.feasible ? "quality " + std::to_string(first.min_triangle_quality)
                                        : first.stage + ": " + first.message) +
                        ")");
  out.result = *best;
  return out;
}

}  // namespace polyflex
