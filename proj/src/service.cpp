#include "polyflex/service.hpp"

#include <algorithm>
#include <cmath>

#include "httplib.h"
#include "polyflex/constructions.hpp"
#include "polyflex/io.hpp"

namespace polyflex {

namespace {

struct HttpError {
  int status;
  std::string stage;
  std::string message;
};

ServiceResponse json_response(int status, const Json& j) { return {status, j.dump(), "application/json"}; }

Json request_body(const std::string& body) {
  try {
    return parse_json(body, "request");
  } catch (const ParseError& e) {
    throw HttpError{400, "request", e.what()};
  }
}

DodecParams request_params(const Json& body) {
  const Json& p = body.is_object() && body.contains("params") ? body["params"] : body;
  try {
    return params_from_json(p);
  } catch (const ParseError& e) {
    throw HttpError{400, "params", e.what()};
  }
}

DodecBuild request_build(const DodecParams& p, const ServiceOptions& opt) {
  try {
    return build_dodecahedron(p, {}, opt.tol);
  } catch (const StageError& e) {
    throw HttpError{422, e.stage(), e.message()};
  }
}

FlexTrajectory request_flex(const DodecBuild& b, int max_samples, const ServiceOptions& opt) {
  StepControl step = opt.step;
  step.max_samples = max_samples;
  try {
    return continue_flex(b.dodecahedron.mesh, b.dodecahedron.config, dodecahedron_driving(), step, opt.tol);
  } catch (const GeometryError& e) {
    throw HttpError{422, "flex", e.what()};
  }
}

int request_max_samples(const Json& body, const ServiceOptions& opt) {
  int n = opt.step.max_samples;
  if (body.is_object() && body.contains("max_samples")) {
    const Json& m = body["max_samples"];
    if (!m.is_number_integer() || m.get<long>() < 1)
      throw HttpError{400, "request", "max_samples must be a positive integer"};
    n = static_cast<int>(std::min<long>(m.get<long>(), opt.max_samples_cap));
  }
  return n;
}

Json range_json(const RangeOfMotion& r) {
  return {{"lo", r.lo},
          {"hi", r.hi},
          {"total_variation", r.total_variation},
          {"metric", RangeOfMotion::metric},
          {"samples", r.samples},
          {"stop_backward", to_string(r.stop_backward)},
          {"stop_forward", to_string(r.stop_forward)}};
}

// Configuration with driving value s between samples i and i + 1, found by
// bisection on the arclength step from sample i.
FlexSample sample_between(const TriMesh& mesh, const FlexTrajectory& t, std::size_t i, double s,
                          const ServiceOptions& opt) {
  const FlexSample& a = t.samples[i];
  const FlexSample& b = t.samples[i + 1];
  FlexStepper from_a(mesh, a.config, opt.step, opt.tol);
  const FlexStepper from_b(mesh, b.config, opt.step, opt.tol);
  const double dir = from_a.tangent().dot(from_b.coordinates() - from_a.coordinates()) >= 0 ? 1.0 : -1.0;
  const Eigen::VectorXd u0 = from_a.coordinates(), t0 = from_a.tangent();
  const double span = (from_b.coordinates() - u0).norm();

  auto value_at = [&](double h, Configuration* out) {
    from_a.set_state(u0, t0);
    if (!from_a.step(dir * h)) throw HttpError{422, "sample", "corrector failed while locating s"};
    const Configuration c = from_a.configuration();
    if (out) *out = c;
    return driving_value(mesh, c, t.driving);
  };

  double lo = 0.0, hi = span;
  const bool rising = b.s > a.s;
  Configuration c = a.config;
  if (s == a.s) return a;
  if (s == b.s) return b;
  for (int k = 0; k < 60; ++k) {
    const double mid = 0.5 * (lo + hi);
    const double v = value_at(mid, nullptr);
    if ((v < s) == rising) lo = mid; else hi = mid;
  }
  value_at(0.5 * (lo + hi), &c);

  FlexSample out;
  out.s = driving_value(mesh, c, t.driving);
  out.arc = a.arc + (b.arc >= a.arc ? 1 : -1) * 0.5 * (lo + hi);
  out.config = c;
  out.max_residual = max_length_error(from_a.linkage(), c);
  out.volume = signed_volume(mesh, c);
  out.intersections = self_intersections(mesh, c, opt.tol).size();
  out.folds = fold_signs(mesh, c, opt.tol);
  return out;
}

ServiceResponse route(const std::string& method, const std::string& path, const std::string& body,
                      const ServiceOptions& opt) {
  if (path == "/health") {
    if (method != "GET") throw HttpError{405, "request", "use GET"};
    return json_response(200, {{"status", "ok"}, {"format", kFormatTag}});
  }
  if (path != "/build" && path != "/flex" && path != "/sample") throw HttpError{404, "request", "no such endpoint"};
  if (method != "POST") throw HttpError{405, "request", "use POST"};

  const Json req = request_body(body);
  const DodecParams params = request_params(req);

  if (path == "/build") {
    const DodecBuild b = request_build(params, opt);
    return json_response(200, {{"format", kFormatTag},
                               {"mesh", mesh_to_json(b.dodecahedron)},
                               {"params", params_to_json(params)},
                               {"diagnostics", build_report(b, opt.tol)}});
  }

  const int max_samples = request_max_samples(req, opt);
  const DodecBuild b = request_build(params, opt);
  const FlexTrajectory traj = request_flex(b, max_samples, opt);
  RangeOfMotion rom;
  try {
    rom = range_of_motion(traj);
  } catch (const GeometryError& e) {
    throw HttpError{422, "flex", e.what()};
  }

  if (path == "/flex") {
    Json out = trajectory_to_json(traj);
    out["range"] = range_json(rom);
    out["base_shape"] = b.base_shape;
    return json_response(200, out);
  }

  if (!req.is_object() || !req.contains("s") || !req["s"].is_number())
    throw HttpError{400, "request", "s must be a number"};
  const double s = req["s"].get<double>();
  if (!(s >= rom.lo && s <= rom.hi))
    throw HttpError{422, "sample", "s lies outside the embedded range [" + std::to_string(rom.lo) + ", " +
                                       std::to_string(rom.hi) + "]"};
  // Closest bracketing pair to the start inside the embedded segment.
  const auto& smp = traj.samples;
  std::optional<std::size_t> best;
  for (std::size_t i = 0; i + 1 < smp.size(); ++i) {
    if (smp[i].intersections || smp[i + 1].intersections) continue;
    const double a = smp[i].s, c = smp[i + 1].s;
    if (s < std::min(a, c) || s > std::max(a, c)) continue;
    const auto dist = [&](std::size_t k) {
      return k > traj.start_index ? k - traj.start_index : traj.start_index - k;
    };
    if (!best || dist(i) < dist(*best)) best = i;
  }
  if (!best) throw HttpError{422, "sample", "s is not reached on the embedded segment"};
  Json out = sample_to_json(sample_between(b.dodecahedron.mesh, traj, *best, s, opt));
  out["format"] = kFormatTag;
  out["driving"] = traj.driving.name();
  return json_response(200, out);
}

}  // namespace

ServiceResponse handle_request(const std::string& method, const std::string& path, const std::string& body,
                               const ServiceOptions& opt) {
  try {
    return route(method, path, body, opt);
  } catch (const HttpError& e) {
    return json_response(e.status, {{"error", e.message}, {"stage", e.stage}});
  } catch (const std::exception& e) {
    return json_response(500, {{"error", e.what()}, {"stage", "internal"}});
  }
}

void serve(const std::string& host, int port, const ServiceOptions& opt) {
  httplib::Server svr;
  auto forward = [opt](const httplib::Request& req, httplib::Response& res) {
    const ServiceResponse r = handle_request(req.method, req.path, req.body, opt);
    res.status = r.status;
    res.set_header("Access-Control-Allow-Origin", "*");
    res.set_content(r.body, r.content_type);
  };
  svr.Get(".*", forward);
  svr.Post(".*", forward);
  svr.Options(".*", [](const httplib::Request&, httplib::Response& res) {
    res.set_header("Access-Control-Allow-Origin", "*");
    res.set_header("Access-Control-Allow-Methods", "GET, POST, OPTIONS");
    res.set_header("Access-Control-Allow-Headers", "Content-Type");
    res.status = 204;
  });
  if (!svr.listen(host, port)) throw GeometryError("cannot listen on " + host + ":" + std::to_string(port));
}

}  // namespace polyflex
