#include "polyflex/io.hpp"

#include <cmath>
#include <fstream>
#include <iomanip>
#include <sstream>

namespace polyflex {

namespace {

const Json& field(const Json& j, const std::string& key, const std::string& path) {
  if (!j.is_object()) throw ParseError(path + " must be an object");
  auto it = j.find(key);
  if (it == j.end()) throw ParseError(path + "." + key + " is missing");
  return *it;
}

double number(const Json& j, const std::string& path) {
  if (!j.is_number()) throw ParseError(path + " must be a number");
  return j.get<double>();
}

Point3 point(const Json& j, const std::string& path) {
  if (!j.is_array() || j.size() != 3) throw ParseError(path + " must be an array of 3 numbers");
  return {number(j[0], path + "[0]"), number(j[1], path + "[1]"), number(j[2], path + "[2]")};
}

void check_format(const Json& j, const std::string& what) {
  const Json& f = field(j, "format", what);
  if (!f.is_string() || f.get<std::string>() != kFormatTag)
    throw ParseError(what + ".format must be \"" + std::string(kFormatTag) + "\"");
}

Json xyz(const Point3& p) { return Json::array({p.x(), p.y(), p.z()}); }

Json config_to_json(const Configuration& c) {
  Json out = Json::object();
  for (const auto& [label, p] : c) out[label] = xyz(p);
  return out;
}

}  // namespace

Json parse_json(const std::string& text, const std::string& source) {
  try {
    return Json::parse(text);
  } catch (const Json::parse_error& e) {
    std::size_t line = 1, col = 1;
    const std::size_t stop = std::min<std::size_t>(e.byte > 0 ? e.byte - 1 : 0, text.size());
    for (std::size_t i = 0; i < stop; ++i) {
      if (text[i] == '\n') {
        ++line;
        col = 1;
      } else {
        ++col;
      }
    }
    throw ParseError(source + ":" + std::to_string(line) + ":" + std::to_string(col) +
                     ": JSON syntax error");
  }
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw GeometryError("cannot open " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw GeometryError("cannot write " + path);
  out << content;
}

Json mesh_to_json(const Realization& r) {
  Json verts = Json::array();
  for (const Label& v : r.mesh.vertices()) verts.push_back({{"id", v}, {"xyz", xyz(r.config.at(v))}});
  Json faces = Json::array();
  for (const Face& f : r.mesh.faces()) faces.push_back(Json::array({f[0], f[1], f[2]}));
  return {{"format", kFormatTag}, {"vertices", verts}, {"faces", faces}};
}

Realization mesh_from_json(const Json& j) {
  check_format(j, "mesh");
  const Json& verts = field(j, "vertices", "mesh");
  const Json& faces = field(j, "faces", "mesh");
  if (!verts.is_array()) throw ParseError("mesh.vertices must be an array");
  if (!faces.is_array()) throw ParseError("mesh.faces must be an array");
  std::vector<Label> labels;
  Configuration config;
  for (std::size_t i = 0; i < verts.size(); ++i) {
    const std::string path = "mesh.vertices[" + std::to_string(i) + "]";
    const Json& id = field(verts[i], "id", path);
    if (!id.is_string()) throw ParseError(path + ".id must be a string");
    labels.push_back(id.get<std::string>());
    config[labels.back()] = point(field(verts[i], "xyz", path), path + ".xyz");
  }
  std::vector<Face> fs;
  for (std::size_t i = 0; i < faces.size(); ++i) {
    const std::string path = "mesh.faces[" + std::to_string(i) + "]";
    const Json& f = faces[i];
    if (!f.is_array() || f.size() != 3 || !f[0].is_string() || !f[1].is_string() || !f[2].is_string())
      throw ParseError(path + " must be an array of 3 vertex ids");
    fs.push_back({f[0].get<std::string>(), f[1].get<std::string>(), f[2].get<std::string>()});
  }
  try {
    return {TriMesh(std::move(labels), std::move(fs)), std::move(config)};
  } catch (const GeometryError& e) {
    throw ParseError(std::string("mesh: ") + e.what());
  }
}

Json params_to_json(const DodecParams& p) {
  return {{"format", kFormatTag},
          {"l", Json::array({p.l1, p.l2, p.l3, p.l4, p.l5})},
          {"h", Json::array({p.h1, p.h2, p.h3})},
          {"base_shape", p.base_shape ? Json(*p.base_shape) : Json(nullptr)}};
}

DodecParams params_from_json(const Json& j) {
  check_format(j, "params");
  const Json& l = field(j, "l", "params");
  const Json& h = field(j, "h", "params");
  if (!l.is_array() || l.size() != 5) throw ParseError("params.l must be an array of 5 numbers");
  if (!h.is_array() || h.size() != 3) throw ParseError("params.h must be an array of 3 numbers");
  double v[8];
  for (int i = 0; i < 5; ++i) v[i] = number(l[i], "params.l[" + std::to_string(i) + "]");
  for (int i = 0; i < 3; ++i) v[5 + i] = number(h[i], "params.h[" + std::to_string(i) + "]");
  for (int i = 0; i < 8; ++i)
    if (!std::isfinite(v[i]) || !(v[i] > 0.0))
      throw ParseError(std::string("params.") + (i < 5 ? "l[" + std::to_string(i) : "h[" + std::to_string(i - 5)) +
                       "] must be positive");
  DodecParams p{v[0], v[1], v[2], v[3], v[4], v[5], v[6], v[7], std::nullopt};
  if (auto it = j.find("base_shape"); it != j.end() && !it->is_null()) {
    p.base_shape = number(*it, "params.base_shape");
    if (!(*p.base_shape > 0.0)) throw ParseError("params.base_shape must be positive");
  }
  return p;
}

FoldSign fold_sign_from_string(const std::string& s) {
  if (s == "mountain") return FoldSign::mountain;
  if (s == "valley") return FoldSign::valley;
  if (s == "flat") return FoldSign::flat;
  throw ParseError("unknown fold sign '" + s + "'");
}

Json sample_to_json(const FlexSample& s) {
  Json folds = Json::object();
  for (const auto& [edge, sign] : s.folds) folds[edge] = to_string(sign);
  return {{"s", s.s},
          {"arc", s.arc},
          {"config", config_to_json(s.config)},
          {"volume", s.volume},
          {"max_residual", s.max_residual},
          {"intersections", s.intersections},
          {"folds", folds}};
}

FlexSample sample_from_json(const Json& j) {
  FlexSample s;
  s.s = number(field(j, "s", "sample"), "sample.s");
  if (auto it = j.find("arc"); it != j.end()) s.arc = number(*it, "sample.arc");
  const Json& c = field(j, "config", "sample");
  if (!c.is_object()) throw ParseError("sample.config must be an object");
  for (auto it = c.begin(); it != c.end(); ++it) s.config[it.key()] = point(it.value(), "sample.config." + it.key());
  s.volume = number(field(j, "volume", "sample"), "sample.volume");
  s.max_residual = number(field(j, "max_residual", "sample"), "sample.max_residual");
  const Json& n = field(j, "intersections", "sample");
  if (!n.is_number_integer()) throw ParseError("sample.intersections must be an integer");
  s.intersections = n.get<std::size_t>();
  const Json& f = field(j, "folds", "sample");
  if (!f.is_object()) throw ParseError("sample.folds must be an object");
  for (auto it = f.begin(); it != f.end(); ++it) {
    if (!it.value().is_string()) throw ParseError("sample.folds." + it.key() + " must be a string");
    s.folds[it.key()] = fold_sign_from_string(it.value().get<std::string>());
  }
  return s;
}

Json trajectory_to_json(const FlexTrajectory& t) {
  Json samples = Json::array();
  for (const FlexSample& s : t.samples) samples.push_back(sample_to_json(s));
  return {{"format", kFormatTag},
          {"driving", t.driving.name()},
          {"start_index", t.start_index},
          {"start_embedded", t.start_embedded},
          {"stop_backward", to_string(t.stop_backward)},
          {"stop_forward", to_string(t.stop_forward)},
          {"samples", samples}};
}

namespace {

StopReason stop_from_string(const std::string& s) {
  for (StopReason r : {StopReason::corrector_failure, StopReason::degenerate_triangle,
                       StopReason::self_intersection, StopReason::loop_closed, StopReason::max_samples})
    if (s == to_string(r)) return r;
  throw ParseError("unknown stop reason '" + s + "'");
}

}  // namespace

FlexTrajectory trajectory_from_json(const Json& j) {
  check_format(j, "trajectory");
  FlexTrajectory t;
  const Json& d = field(j, "driving", "trajectory");
  if (!d.is_string()) throw ParseError("trajectory.driving must be a string");
  try {
    t.driving = DrivingSelector::parse(d.get<std::string>());
  } catch (const GeometryError& e) {
    throw ParseError(std::string("trajectory.driving: ") + e.what());
  }
  const Json& samples = field(j, "samples", "trajectory");
  if (!samples.is_array()) throw ParseError("trajectory.samples must be an array");
  for (std::size_t i = 0; i < samples.size(); ++i) {
    try {
      t.samples.push_back(sample_from_json(samples[i]));
    } catch (const ParseError& e) {
      throw ParseError("trajectory.samples[" + std::to_string(i) + "]: " + e.what());
    }
  }
  if (auto it = j.find("start_index"); it != j.end() && it->is_number_integer())
    t.start_index = it->get<std::size_t>();
  if (auto it = j.find("start_embedded"); it != j.end() && it->is_boolean()) t.start_embedded = it->get<bool>();
  if (auto it = j.find("stop_backward"); it != j.end() && it->is_string())
    t.stop_backward = stop_from_string(it->get<std::string>());
  if (auto it = j.find("stop_forward"); it != j.end() && it->is_string())
    t.stop_forward = stop_from_string(it->get<std::string>());
  if (!t.samples.empty() && t.start_index >= t.samples.size())
    throw ParseError("trajectory.start_index is out of range");
  return t;
}

std::string export_obj(const Realization& r) {
  std::ostringstream out;
  out << std::setprecision(17);
  out << "# polyflex mesh: " << r.mesh.vertex_count() << " vertices, " << r.mesh.face_count() << " faces\n";
  std::map<Label, std::size_t> index;
  std::size_t next = 1;
  for (const Label& v : r.mesh.vertices()) {
    const Point3& p = r.config.at(v);
    index[v] = next++;
    out << "v " << p.x() << ' ' << p.y() << ' ' << p.z() << '\n';
  }
  for (const Face& f : r.mesh.faces())
    out << "f " << index.at(f[0]) << ' ' << index.at(f[1]) << ' ' << index.at(f[2]) << '\n';
  return out.str();
}

Json check_report(const Realization& r, const Tolerance& tol) {
  const MeshReport m = validate(r.mesh);
  Json out = {{"vertices", m.vertices}, {"edges", m.edges},    {"faces", m.faces},
              {"euler", m.euler},       {"closed", m.closed}, {"oriented", m.oriented},
              {"triangulated_sphere", m.is_triangulated_sphere()}};
  Json problems = Json::array();
  for (const auto& p : m.problems) problems.push_back(p);
  try {
    check_configuration(r.mesh, r.config);
    const IntersectionReport ints = self_intersections(r.mesh, r.config, tol);
    Json pairs = Json::array();
    for (const auto& p : ints.pairs) {
      const Face& a = r.mesh.faces()[p.face_i];
      const Face& b = r.mesh.faces()[p.face_j];
      pairs.push_back(Json::array({Json::array({a[0], a[1], a[2]}), Json::array({b[0], b[1], b[2]})}));
    }
    out["intersecting_pairs"] = pairs;
    out["embedded"] = ints.empty();
    out["min_face_clearance"] = min_face_clearance(r.mesh, r.config);
    out["min_triangle_quality"] = min_triangle_quality(r.mesh, r.config);
    if (m.closed) out["volume"] = signed_volume(r.mesh, r.config);
    if (m.is_triangulated_sphere()) out["flex_dimension"] = flex_dimension(r.mesh, r.config, tol);
  } catch (const GeometryError& e) {
    problems.push_back(e.what());
  }
  out["problems"] = problems;
  return out;
}

Json build_report(const DodecBuild& b, const Tolerance& tol) {
  Json out = check_report(b.dodecahedron, tol);
  out["base_shape"] = b.base_shape;
  out["x"] = b.xy.x;
  out["y"] = b.xy.y;
  out["tent_face"] = Json::array({b.tent_face[0], b.tent_face[1], b.tent_face[2]});
  out["tent_heights"] = Json::array({b.tent_heights[0], b.tent_heights[1], b.tent_heights[2]});
  out["tent_volume"] = b.tent_volume;
  return out;
}

}  // namespace polyflex
