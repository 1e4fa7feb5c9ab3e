// Command line front end: build, flex, check, net, enumerate, optimize, serve.
#include <cstdio>
#include <fstream>
#include <iostream>
#include <map>

#include "CLI11.hpp"
#include "polyflex/constructions.hpp"
#include "polyflex/io.hpp"
#include "polyflex/minimality.hpp"
#include "polyflex/net.hpp"
#include "polyflex/optimize.hpp"
#include "polyflex/service.hpp"

using namespace polyflex;

namespace {

struct Failure {
  std::string stage;
  std::string message;
};

void emit(const std::string& path, const std::string& text) {
  if (path.empty() || path == "-")
    std::cout << text;
  else
    write_file(path, text);
}

DodecParams load_params(const std::string& path, bool wide) {
  if (path.empty()) return wide ? DodecParams::wide_range() : DodecParams::defaults();
  try {
    return params_from_json(parse_json(read_file(path), path));
  } catch (const ParseError& e) {
    throw Failure{"params", e.what()};
  }
}

Json load_json(const std::string& path) {
  try {
    return parse_json(read_file(path), path);
  } catch (const ParseError& e) {
    throw Failure{"input", e.what()};
  }
}

void add_step_flags(CLI::App* cmd, StepControl& step) {
  cmd->add_option("--max-samples", step.max_samples, "Samples per direction")->check(CLI::PositiveNumber);
  cmd->add_option("--max-step", step.max_step, "Largest arclength step, relative to scale")
      ->check(CLI::PositiveNumber);
  cmd->add_option("--max-driving-step", step.max_driving_step, "Largest change of the driving value per step")
      ->check(CLI::PositiveNumber);
  cmd->add_flag("!--keep-going", step.stop_on_intersection, "Do not stop at self-intersections");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Flexible polyhedra: construction, continuation and checks"};
  app.require_subcommand(1);

  std::string params_path, out_path, diag_path, mesh_path, traj_path, log_path, addr = "127.0.0.1:8080";
  bool wide = false;
  StepControl step;
  int n_max = 7, budget = 100;
  std::uint64_t seed = 1;
  double floor = 1e-3;
  std::vector<std::string> tree;

  auto* build = app.add_subcommand("build", "Parameters to mesh JSON and diagnostics");
  build->add_option("-p,--params", params_path, "Params JSON (default: the standard parameters)");
  build->add_flag("--wide", wide, "Use the wide-range parameter preset");
  build->add_option("-o,--out", out_path, "Mesh JSON output");
  build->add_option("--diagnostics", diag_path, "Diagnostics JSON output (default: stdout)");

  auto* flex = app.add_subcommand("flex", "Parameters to trajectory JSON");
  flex->add_option("-p,--params", params_path, "Params JSON");
  flex->add_flag("--wide", wide, "Use the wide-range parameter preset");
  flex->add_option("-o,--out", out_path, "Trajectory JSON output");
  add_step_flags(flex, step);

  auto* check = app.add_subcommand("check", "Validation, intersection, volume and flex dimension report");
  check->add_option("mesh", mesh_path, "Mesh JSON")->required();

  auto* net = app.add_subcommand("net", "Mesh and trajectory to an SVG net");
  net->add_option("-m,--mesh", mesh_path, "Mesh JSON")->required();
  net->add_option("-t,--trajectory", traj_path, "Trajectory JSON for score-both tags");
  net->add_option("--tree", tree, "Fold edges as a-b, spanning the dual graph");
  net->add_option("-o,--out", out_path, "SVG output");

  auto* enumerate = app.add_subcommand("enumerate", "Minimality report over small triangulations");
  enumerate->add_option("--max", n_max, "Largest vertex count")->check(CLI::Range(4, 10));

  auto* optimize = app.add_subcommand("optimize", "Random search for a longer embedded flex");
  optimize->add_option("-p,--params", params_path, "Seed params JSON");
  optimize->add_flag("--wide", wide, "Start from the wide-range preset");
  optimize->add_option("--budget", budget, "Number of trials")->check(CLI::PositiveNumber);
  optimize->add_option("--seed", seed, "Random seed");
  optimize->add_option("--floor", floor, "Triangle quality floor")->check(CLI::NonNegativeNumber);
  optimize->add_option("--log", log_path, "JSON-lines log, appended");
  optimize->add_option("-o,--out", out_path, "Best params JSON output");

  auto* serve_cmd = app.add_subcommand("serve", "Local HTTP service");
  serve_cmd->add_option("address", addr, "host:port");

  CLI11_PARSE(app, argc, argv);

  try {
    if (build->parsed()) {
      const DodecParams p = load_params(params_path, wide);
      const DodecBuild b = build_dodecahedron(p);
      Json mesh = mesh_to_json(b.dodecahedron);
      emit(out_path, mesh.dump(2) + "\n");
      emit(diag_path, build_report(b).dump(2) + "\n");
    } else if (flex->parsed()) {
      const DodecParams p = load_params(params_path, wide);
      const DodecBuild b = build_dodecahedron(p);
      FlexTrajectory t;
      try {
        t = continue_flex(b.dodecahedron.mesh, b.dodecahedron.config, dodecahedron_driving(), step);
      } catch (const GeometryError& e) {
        throw Failure{"flex", e.what()};
      }
      Json out = trajectory_to_json(t);
      try {
        const RangeOfMotion r = range_of_motion(t);
        out["range"] = {{"lo", r.lo}, {"hi", r.hi}, {"total_variation", r.total_variation}};
      } catch (const GeometryError&) {
      }
      emit(out_path, out.dump(2) + "\n");
    } else if (check->parsed()) {
      Realization r;
      try {
        r = mesh_from_json(load_json(mesh_path));
      } catch (const GeometryError& e) {
        throw Failure{"check", e.what()};
      }
      const Json rep = check_report(r);
      std::cout << rep.dump(2) << "\n";
      if (!rep["triangulated_sphere"].get<bool>()) throw Failure{"check", "not a triangulated sphere"};
      if (rep.contains("flex_dimension")) {
        const int d = rep["flex_dimension"].get<int>();
        std::cerr << (d == 0 ? "rigid" : "flexible") << " (flex dimension " << d << ")\n";
      }
    } else if (net->parsed()) {
      Realization r;
      std::optional<FlexTrajectory> t;
      try {
        r = mesh_from_json(load_json(mesh_path));
        if (!traj_path.empty()) t = trajectory_from_json(load_json(traj_path));
      } catch (const GeometryError& e) {
        throw Failure{"input", e.what()};
      }
      UnfoldOptions opt;
      if (t) opt.trajectory = &*t;
      if (!tree.empty()) {
        std::vector<Edge> edges;
        for (const auto& s : tree) {
          const auto dash = s.find('-');
          if (dash == std::string::npos) throw Failure{"net", "tree edge '" + s + "' is not of the form a-b"};
          edges.push_back(Edge::make(s.substr(0, dash), s.substr(dash + 1)));
        }
        opt.tree = edges;
      }
      NetLayout layout;
      try {
        layout = unfold(r.mesh, r.config, opt);
      } catch (const GeometryError& e) {
        throw Failure{"net", e.what()};
      }
      for (const auto& w : layout.warnings) std::cerr << "warning: " << w << "\n";
      emit(out_path, export_svg(layout));
    } else if (enumerate->parsed()) {
      const auto classes = enumerate_triangulations(n_max);
      std::map<int, int> counts;
      for (const auto& c : classes) ++counts[c.vertex_count()];
      Json by_n = Json::object();
      for (const auto& [n, k] : counts) by_n[std::to_string(n)] = k;
      Json cands = Json::array();
      for (const auto& c : flexibility_candidates(std::min(n_max, 7))) {
        const auto deg = c.graph.degrees();
        const RigidityProbe probe = generic_rigidity_probe(c.graph, 5, seed);
        cands.push_back({{"kind", to_string(c.kind)},
                         {"vertices", c.graph.vertex_count()},
                         {"edges", c.graph.edge_count()},
                         {"degrees", deg},
                         {"reduced_vertices", c.reduced.vertex_count()},
                         {"generic_flex_dimension", {probe.min_flex_dimension, probe.max_flex_dimension}}});
      }
      Json out = {{"format", kFormatTag}, {"max_vertices", n_max}, {"classes", by_n}, {"candidates", cands}};
      std::cout << out.dump(2) << "\n";
    } else if (optimize->parsed()) {
      const DodecParams p = load_params(params_path, wide);
      SearchOptions opt;
      opt.budget = budget;
      opt.seed = seed;
      opt.quality_floor = floor;
      std::ofstream log;
      if (!log_path.empty()) {
        log.open(log_path, std::ios::app);
        if (!log) throw Failure{"optimize", "cannot open log " + log_path};
      }
      opt.on_trial = [&](int i, const DodecParams& q, const EvalResult& r, bool accepted) {
        if (!log.is_open()) return;
        Json line = {{"trial", i},        {"seed", seed},         {"params", params_to_json(q)},
                     {"feasible", r.feasible}, {"range", r.range}, {"min_clearance", r.min_clearance},
                     {"min_triangle_quality", r.min_triangle_quality}, {"accepted", accepted}};
        if (!r.feasible) line["stage"] = r.stage;
        log << line.dump() << "\n" << std::flush;
      };
      SearchResult best;
      try {
        best = search(p, opt);
      } catch (const GeometryError& e) {
        throw Failure{"optimize", e.what()};
      }
      Json out = params_to_json(best.params);
      out["range"] = best.result.range;
      out["min_clearance"] = best.result.min_clearance;
      out["accepted"] = best.accepted;
      emit(out_path, out.dump(2) + "\n");
    } else if (serve_cmd->parsed()) {
      const auto colon = addr.rfind(':');
      if (colon == std::string::npos) throw Failure{"serve", "address must be host:port"};
      int port = 0;
      try {
        port = std::stoi(addr.substr(colon + 1));
      } catch (const std::exception&) {
        throw Failure{"serve", "bad port in " + addr};
      }
      std::cerr << "listening on " << addr << "\n";
      serve(addr.substr(0, colon), port);
    }
  } catch (const Failure& f) {
    std::cerr << "error [" << f.stage << "]: " << f.message << "\n";
    return 1;
  } catch (const StageError& e) {
    std::cerr << "error [" << e.stage() << "]: " << e.message() << "\n";
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "error [io]: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
