#include "polyflex/constructions.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <map>

#include "polyflex/surgery.hpp"

namespace polyflex {

namespace {

bool triangle_ok(double a, double b, double c) {
  return a > 0 && b > 0 && c > 0 && a < b + c && b < a + c && c < a + b;
}

// Roots of f on [lo, hi] from a uniform scan plus bisection. Points where f
// is undefined break the scan.
std::vector<double> scan_roots(const std::function<std::optional<double>(double)>& f, double lo,
                               double hi, int n) {
  std::vector<double> roots;
  std::optional<double> prev;
  double x_prev = lo;
  for (int i = 0; i <= n; ++i) {
    const double x = lo + (hi - lo) * i / n;
    const std::optional<double> v = f(x);
    if (v && *v == 0.0) {
      roots.push_back(x);
    } else if (v && prev && (*v > 0) != (*prev > 0)) {
      double a = x_prev, b = x, fa = *prev;
      for (int k = 0; k < 200 && b - a > 1e-16 * std::max(1.0, std::abs(b)); ++k) {
        const double m = 0.5 * (a + b);
        const std::optional<double> fm = f(m);
        if (!fm) break;
        if ((*fm > 0) == (fa > 0)) {
          a = m;
          fa = *fm;
        } else {
          b = m;
        }
      }
      roots.push_back(0.5 * (a + b));
    }
    prev = v;
    x_prev = x;
  }
  return roots;
}

Point3 half_turn_z(const Point3& p) { return {-p.x(), -p.y(), p.z()}; }

struct Bricard1Frame {
  Point3 a, b, a2, b2, c;
};

// Equator for |AA'| = 2 ra and |B| = rb, with C trilaterated below ABA'.
std::optional<Bricard1Frame> bricard1_frame(const Bricard1Lengths& len, double ra, double rb,
                                            const Tolerance& tol) {
  const double half_sum = 0.5 * (len.ab * len.ab + len.a2b * len.a2b);
  const double cphi = (len.a2b * len.a2b - len.ab * len.ab) / (4.0 * ra * rb);
  const double dz2 = half_sum - ra * ra - rb * rb;
  if (std::abs(cphi) > 1.0 || dz2 < 0.0) return std::nullopt;
  const double sphi = std::sqrt(1.0 - cphi * cphi);
  Bricard1Frame f;
  f.a = {ra, 0.0, 0.0};
  f.b = {rb * cphi, rb * sphi, std::sqrt(dz2)};
  f.a2 = half_turn_z(f.a);
  f.b2 = half_turn_z(f.b);
  if (collinear(f.a, f.b, f.a2)) return std::nullopt;
  std::vector<Point3> sol;
  try {
    sol = trilaterate(f.a, f.b, f.a2, len.ca, len.cb, len.ca2, tol);
  } catch (const GeometryError&) {
    return std::nullopt;
  }
  if (sol.empty()) return std::nullopt;
  f.c = sol.back();
  return f;
}

std::optional<double> bricard1_largest_root(const Bricard1Lengths& len, double ra,
                                            const Tolerance& tol) {
  const double half_sum = 0.5 * (len.ab * len.ab + len.a2b * len.a2b);
  const double hi = std::sqrt(std::max(0.0, half_sum - ra * ra));
  const double lo = std::abs(len.a2b * len.a2b - len.ab * len.ab) / (4.0 * ra);
  if (!(hi > lo)) return std::nullopt;
  const double pad = 1e-12 * hi;
  auto f = [&](double rb) -> std::optional<double> {
    auto fr = bricard1_frame(len, ra, rb, tol);
    if (!fr) return std::nullopt;
    return (fr->c - fr->b2).norm() - len.cb2;
  };
  const auto roots = scan_roots(f, lo + pad, hi - pad, 400);
  if (roots.empty()) return std::nullopt;
  return *std::max_element(roots.begin(), roots.end());
}

void check_lengths(const Realization& r, const EdgeLengthTable& table, double scale,
                   const Tolerance& tol, const std::string& what) {
  for (const auto& [e, l] : table)
    if (std::abs((r.config.at(e.a) - r.config.at(e.b)).norm() - l) > tol.eps_len * scale)
      throw GeometryError(what + ": edge " + e.name() + " misses its target length");
}

EdgeLengthTable octa_table(const Bricard1Lengths& len, const OctaLabels& n) {
  const auto& [A, B, A2, B2, C, C2] = n;
  return {{Edge::make(A, B), len.ab},    {Edge::make(A2, B2), len.ab},  {Edge::make(A2, B), len.a2b},
          {Edge::make(A, B2), len.a2b},  {Edge::make(C, A), len.ca},    {Edge::make(C2, A2), len.ca},
          {Edge::make(C, A2), len.ca2},  {Edge::make(C2, A), len.ca2},  {Edge::make(C, B), len.cb},
          {Edge::make(C2, B2), len.cb},  {Edge::make(C, B2), len.cb2},  {Edge::make(C2, B), len.cb2}};
}

template <class F>
auto staged(const std::string& stage, F&& f) -> decltype(f()) {
  try {
    return f();
  } catch (const StageError&) {
    throw;
  } catch (const GeometryError& e) {
    throw StageError(stage, e.what());
  }
}

}  // namespace

DerivedLengths derive_xy(const DodecParams& p) {
  for (double v : {p.l1, p.l2, p.l3, p.l4, p.l5})
    if (!(v > 0.0) || !std::isfinite(v)) throw StageError("derive_xy", "infeasible lengths");
  if (!triangle_ok(p.l1, p.l2, p.l3)) throw StageError("derive_xy", "infeasible lengths");
  const double s = p.l3 + p.l4;
  const double x2 = p.l2 * p.l2 + s * s - (s / p.l3) * (p.l2 * p.l2 + p.l3 * p.l3 - p.l1 * p.l1);
  const double y2 = p.l1 * p.l1 + s * s - (s / p.l3) * (p.l1 * p.l1 + p.l3 * p.l3 - p.l2 * p.l2);
  if (!(x2 > 0.0) || !(y2 > 0.0)) throw StageError("derive_xy", "infeasible lengths");
  DerivedLengths d{std::sqrt(x2), std::sqrt(y2)};
  if (!triangle_ok(p.l2, s, d.x) || !triangle_ok(p.l1, s, d.y))
    throw StageError("derive_xy", "infeasible lengths");
  return d;
}

Bricard1Lengths bricard1_lengths(const DodecParams& p) {
  const DerivedLengths d = derive_xy(p);
  return {p.l2, p.l1, p.l5, d.y, p.l3 + p.l4, d.x};
}

TriMesh octahedron_mesh(const OctaLabels& n) {
  const auto& [A, B, A2, B2, C, C2] = n;
  const std::array<Label, 4> eq = {A, B, A2, B2};
  std::vector<Face> faces;
  for (int i = 0; i < 4; ++i) faces.push_back({C, eq[(i + 1) % 4], eq[i]});
  for (int i = 0; i < 4; ++i) faces.push_back({C2, eq[i], eq[(i + 1) % 4]});
  return TriMesh({A, B, A2, B2, C, C2}, std::move(faces));
}

Realization build_bricard1(const Bricard1Lengths& len, double base_shape, const OctaLabels& labels,
                           const Tolerance& tol) {
  for (double v : {len.ab, len.a2b, len.ca, len.cb, len.ca2, len.cb2})
    if (!(v > 0.0) || !std::isfinite(v)) throw GeometryError("octahedron lengths must be positive");
  if (!(base_shape > 0.0)) throw GeometryError("base shape infeasible");
  const double ra = 0.5 * base_shape;
  const auto rb = bricard1_largest_root(len, ra, tol);
  if (!rb) throw GeometryError("base shape infeasible");
  const auto f = bricard1_frame(len, ra, *rb, tol);
  if (!f) throw GeometryError("base shape infeasible");

  const auto& [A, B, A2, B2, C, C2] = labels;
  Realization r{octahedron_mesh(labels),
                {{A, f->a}, {B, f->b}, {A2, f->a2}, {B2, f->b2}, {C, f->c}, {C2, half_turn_z(f->c)}}};
  check_lengths(r, octa_table(len, labels), configuration_scale(r.config), tol, "base shape infeasible");
  return r;
}

std::optional<std::pair<double, double>> bricard1_base_interval(const Bricard1Lengths& len, int grid) {
  const double ra_max = std::sqrt(0.5 * (len.ab * len.ab + len.a2b * len.a2b));
  int best_lo = -1, best_len = 0, run_lo = -1;
  std::vector<double> base(grid + 1);
  for (int i = 1; i < grid; ++i) {
    base[i] = 2.0 * ra_max * i / grid;
    const bool ok = bricard1_largest_root(len, 0.5 * base[i], {}).has_value();
    if (ok && run_lo < 0) run_lo = i;
    if (!ok) run_lo = -1;
    if (run_lo >= 0 && i - run_lo + 1 > best_len) {
      best_len = i - run_lo + 1;
      best_lo = run_lo;
    }
  }
  if (best_len == 0) return std::nullopt;
  return std::make_pair(base[best_lo], base[best_lo + best_len - 1]);
}

Realization build_bricard1(const DodecParams& p, const Tolerance& tol) {
  const Bricard1Lengths len = bricard1_lengths(p);
  double base = 0.0;
  if (p.base_shape) {
    base = *p.base_shape;
  } else {
    const auto iv = bricard1_base_interval(len);
    if (!iv) throw GeometryError("base shape infeasible");
    base = 0.5 * (iv->first + iv->second);
  }
  return build_bricard1(len, base, kOctaLabels, tol);
}

Realization build_bricard2(const Bricard2Lengths& len, double d, const Tolerance& tol) {
  for (double v : {len.ab, len.a2b, len.ca, len.cb, len.ca2, len.cb2})
    if (!(v > 0.0) || !std::isfinite(v)) throw GeometryError("octahedron lengths must be positive");
  if (!(d > 0.0)) throw GeometryError("base shape infeasible");
  const double bx = (len.ab * len.ab - len.a2b * len.a2b + d * d) / (2.0 * d);
  const double rho2 = len.ab * len.ab - bx * bx;
  if (!(rho2 > 0.0)) throw GeometryError("base shape infeasible");
  const double rho = std::sqrt(rho2);
  const Point3 a(0, 0, 0), a2(d, 0, 0);
  auto mirror = [](const Point3& p) { return Point3(p.x(), p.y(), -p.z()); };
  auto apex = [&](double th) -> std::optional<std::pair<Point3, Point3>> {
    const Point3 b(bx, rho * std::cos(th), rho * std::sin(th));
    try {
      auto sol = trilaterate(a, a2, b, len.ca, len.ca2, len.cb, tol);
      if (sol.empty()) return std::nullopt;
      return std::make_pair(b, sol.front());
    } catch (const GeometryError&) {
      return std::nullopt;
    }
  };
  auto f = [&](double th) -> std::optional<double> {
    auto s = apex(th);
    if (!s) return std::nullopt;
    return (s->second - mirror(s->first)).norm() - len.cb2;
  };
  const double pi = std::acos(-1.0);
  const auto roots = scan_roots(f, 1e-6, pi - 1e-6, 720);
  if (roots.empty()) throw GeometryError("base shape infeasible");
  const auto s = apex(roots.front());
  const Point3 b = s->first, c = s->second;

  Realization r{octahedron_mesh(kOctaLabels),
                {{"A", a}, {"B", b}, {"A'", a2}, {"B'", mirror(b)}, {"C", c}, {"C'", mirror(c)}}};
  const EdgeLengthTable table = {
      {Edge::make("A", "B"), len.ab},   {Edge::make("A", "B'"), len.ab},   {Edge::make("A'", "B"), len.a2b},
      {Edge::make("A'", "B'"), len.a2b}, {Edge::make("C", "A"), len.ca},    {Edge::make("C'", "A"), len.ca},
      {Edge::make("C", "A'"), len.ca2}, {Edge::make("C'", "A'"), len.ca2}, {Edge::make("C", "B"), len.cb},
      {Edge::make("C'", "B'"), len.cb}, {Edge::make("C", "B'"), len.cb2},  {Edge::make("C'", "B"), len.cb2}};
  check_lengths(r, table, configuration_scale(r.config), tol, "base shape infeasible");
  return r;
}

Realization locate_D(const Realization& octa, const DodecParams& p, const Tolerance& tol) {
  if (!(p.l3 > 0.0) || !(p.l4 > 0.0)) throw GeometryError("construction inconsistent: D must lie inside AC'");
  const Realization r = split_edge(octa, "A", "C'", p.l3 / (p.l3 + p.l4), "D");
  const double scale = configuration_scale(r.config);
  const auto& c = r.config;
  if (std::abs((c.at("D") - c.at("B")).norm() - p.l1) > tol.eps_len * scale ||
      std::abs((c.at("D") - c.at("B'")).norm() - p.l2) > tol.eps_len * scale)
    throw GeometryError("construction inconsistent");
  return r;
}

Realization cut_reflect_to_decahedron(const Realization& octa_with_d, const Tolerance& tol) {
  const SurfaceQuad quad{{ExistingVertex{"D"}, ExistingVertex{"B'"}, ExistingVertex{"A'"},
                          ExistingVertex{"B"}}};
  SurgeryOptions opt;
  opt.moving_vertex = "C'";
  opt.rename = {{"C'", "C''"}};
  return cut_and_reflect(octa_with_d, quad, opt, tol);
}

EdgeLengthTable decahedron_lengths(const DodecParams& p) {
  const DerivedLengths d = derive_xy(p);
  const double s = p.l3 + p.l4;
  return {{Edge::make("A", "C"), p.l5},    {Edge::make("C", "A'"), s},       {Edge::make("A'", "C''"), p.l4},
          {Edge::make("C''", "D"), p.l5},  {Edge::make("D", "A"), p.l3},     {Edge::make("B", "A"), p.l2},
          {Edge::make("B", "C"), d.y},     {Edge::make("B", "A'"), p.l1},    {Edge::make("B", "C''"), d.x},
          {Edge::make("B", "D"), p.l1},    {Edge::make("B'", "A"), p.l1},    {Edge::make("B'", "C"), d.x},
          {Edge::make("B'", "A'"), p.l2},  {Edge::make("B'", "C''"), d.y},   {Edge::make("B'", "D"), p.l2}};
}

Face select_tent_face(const TriMesh& mesh, const Configuration& config, const Tolerance& tol) {
  const IntersectionReport rep = self_intersections(mesh, config, tol);
  if (rep.empty()) throw GeometryError("single tent insufficient: surface has no self-intersections");
  const auto common = rep.common_faces();
  if (common.size() != 1)
    throw GeometryError("single tent insufficient: " + std::to_string(common.size()) +
                        " faces are common to all intersecting pairs");
  return mesh.faces()[common.front()];
}

Realization erect_tent(const Realization& r, const Face& face, const std::array<double, 3>& h,
                       const Label& apex, const Tolerance& tol) {
  const auto& faces = r.mesh.faces();
  auto it = std::find(faces.begin(), faces.end(), face);
  if (it == faces.end()) throw GeometryError("tent face is not a face of the surface");
  if (r.mesh.has_vertex(apex)) throw GeometryError("label already in use: " + apex);
  for (double v : h)
    if (!(v > 0.0)) throw GeometryError("tent distances must be positive");

  const Point3 &p0 = r.config.at(face[0]), &p1 = r.config.at(face[1]), &p2 = r.config.at(face[2]);
  const auto sol = trilaterate(p0, p1, p2, h[0], h[1], h[2], tol);
  if (sol.empty()) throw GeometryError("tent apex infeasible");
  if (sol.size() == 1) throw GeometryError("degenerate tent apex: it lies in the face plane");

  std::vector<Face> new_faces;
  for (const Face& f : faces)
    if (f != face) new_faces.push_back(f);
  new_faces.push_back({face[0], face[1], apex});
  new_faces.push_back({face[1], face[2], apex});
  new_faces.push_back({face[2], face[0], apex});
  std::vector<Label> verts = r.mesh.vertices();
  verts.push_back(apex);
  Realization out{TriMesh(std::move(verts), std::move(new_faces)), r.config};

  // sol[0] is on the side of the face normal, i.e. outward.
  for (const Point3& t : sol) {
    out.config[apex] = t;
    if (self_intersections(out.mesh, out.config, tol).empty()) return out;
  }
  throw GeometryError("tent does not remove the self-intersections");
}

std::array<double, 3> tent_heights(const Face& face, const DodecParams& p) {
  auto in_face = [&](const Label& v) { return std::find(face.begin(), face.end(), v) != face.end(); };
  for (const auto& [apex, rim] : {std::pair<Label, Label>{"B", "C"}, {"B'", "C''"}}) {
    if (!in_face(apex) || !in_face(rim)) continue;
    std::array<double, 3> h{};
    for (int i = 0; i < 3; ++i) h[i] = face[i] == apex ? p.h1 : face[i] == rim ? p.h2 : p.h3;
    return h;
  }
  throw GeometryError("tent face has no y-edge; pass explicit tent heights");
}

DrivingSelector dodecahedron_driving() { return DrivingSelector::dihedral_at("A", "B'"); }

namespace {

struct Attempt {
  Realization octa, deca, dodeca;
  Face face;
  std::array<double, 3> h{};
  double tent_volume = 0.0;
};

Attempt attempt(const DodecParams& p, const Bricard1Lengths& len, double base, const BuildOptions& opt,
                const Tolerance& tol) {
  Attempt a;
  a.octa = staged("bricard1", [&] { return build_bricard1(len, base, kOctaLabels, tol); });
  const Realization with_d = staged("locate_D", [&] { return locate_D(a.octa, p, tol); });
  a.deca = staged("decahedron", [&] { return cut_reflect_to_decahedron(with_d, tol); });
  a.face = staged("tent_face", [&] { return select_tent_face(a.deca.mesh, a.deca.config, tol); });
  a.h = staged("tent", [&] { return opt.tent_heights ? *opt.tent_heights : tent_heights(a.face, p); });
  a.dodeca = staged("tent", [&] { return erect_tent(a.deca, a.face, a.h, "T", tol); });
  const auto& c = a.dodeca.config;
  a.tent_volume = signed_volume_tetra(c.at(a.face[0]), c.at(a.face[1]), c.at(a.face[2]), c.at("T"));
  if (signed_volume(a.dodeca.mesh, a.dodeca.config) < 0.0) a.dodeca.mesh = a.dodeca.mesh.reversed();
  return a;
}

DodecBuild finish(const Attempt& a, double base, const DerivedLengths& xy) {
  DodecBuild b;
  b.octahedron = a.octa;
  b.decahedron = a.deca;
  b.dodecahedron = a.dodeca;
  b.tent_face = a.face;
  b.tent_heights = a.h;
  b.base_shape = base;
  b.xy = xy;
  b.tent_volume = a.tent_volume;
  return b;
}

}  // namespace

DodecBuild build_dodecahedron(const DodecParams& p, const BuildOptions& opt, const Tolerance& tol) {
  tol.validate();
  const DerivedLengths xy = derive_xy(p);
  for (double v : {p.h1, p.h2, p.h3})
    if (!(v > 0.0) || !std::isfinite(v)) throw StageError("tent", "tent distances must be positive");
  const Bricard1Lengths len = bricard1_lengths(p);

  if (p.base_shape) return finish(attempt(p, len, *p.base_shape, opt, tol), *p.base_shape, xy);

  const auto iv = bricard1_base_interval(len, opt.scan_grid);
  if (!iv) throw StageError("bricard1", "base shape infeasible");

  // Scan the base shape for embedded dodecahedra and keep the longest run
  // that tents the same face.
  const int n = std::max(opt.scan_grid, 8);
  std::vector<std::optional<Face>> good(n + 1);
  std::vector<double> base(n + 1);
  std::map<std::string, std::pair<int, std::string>> failures;  // stage -> (count, last message)
  for (int i = 0; i <= n; ++i) {
    base[i] = iv->first + (iv->second - iv->first) * i / n;
    try {
      good[i] = attempt(p, len, base[i], opt, tol).face;
    } catch (const StageError& e) {
      auto& f = failures[e.stage()];
      ++f.first;
      f.second = e.message();
    } catch (const GeometryError&) {
    }
  }
  int best_lo = -1, best_len = 0;
  for (int i = 0; i <= n;) {
    if (!good[i]) {
      ++i;
      continue;
    }
    int j = i;
    while (j + 1 <= n && good[j + 1] && *good[j + 1] == *good[i]) ++j;
    if (j - i + 1 > best_len) best_len = j - i + 1, best_lo = i;
    i = j + 1;
  }
  if (best_len == 0) {
    // Report the stage that failed most often along the scan.
    auto worst = std::max_element(failures.begin(), failures.end(),
                                  [](const auto& a, const auto& b) { return a.second.first < b.second.first; });
    if (worst != failures.end())
      throw StageError(worst->first, worst->second.second + " (at every base shape of the scan)");
    throw StageError("reference", "no embedded configuration on the base-shape scan");
  }

  const double seed = base[best_lo + best_len / 2];
  const Attempt at_seed = attempt(p, len, seed, opt, tol);

  // Follow the flex to the ends of the embedded segment and rebuild at the
  // middle of the |AA'| values it sweeps.
  double lo = seed, hi = seed;
  try {
    const FlexTrajectory traj = continue_flex(at_seed.dodeca.mesh, at_seed.dodeca.config,
                                              dodecahedron_driving(), opt.reference_step, tol);
    for (const FlexSample& s : traj.samples) {
      const double d = (s.config.at("A") - s.config.at("A'")).norm();
      lo = std::min(lo, d);
      hi = std::max(hi, d);
    }
  } catch (const GeometryError& e) {
    throw StageError("reference", e.what());
  }
  const double mid = 0.5 * (lo + hi);
  try {
    const Attempt at_mid = attempt(p, len, mid, opt, tol);
    if (at_mid.face == at_seed.face) return finish(at_mid, mid, xy);
  } catch (const GeometryError&) {
  }
  return finish(at_seed, seed, xy);
}

Min8Build build_min8_twist(const Min8Params& p, const Tolerance& tol) {
  const double cb2 = p.a * p.a - p.b * p.b + p.cT * p.cT;
  if (!(cb2 > 0.0)) throw GeometryError("no extension point: a^2 - b^2 + cT^2 must be positive");
  if (!(p.b > p.cT)) throw GeometryError("no extension point: p5 does not lie beyond p0");
  const Bricard1Lengths len{p.a, p.b, p.c1, p.cT, p.c3, std::sqrt(cb2)};
  const OctaLabels labels = {"p1", "pT", "p3", "pB", "p2", "p0"};

  double base = 0.0;
  if (p.base_shape) {
    base = *p.base_shape;
  } else {
    const auto iv = bricard1_base_interval(len);
    if (!iv) throw GeometryError("base shape infeasible");
    base = 0.5 * (iv->first + iv->second);
  }
  Min8Build out;
  out.octahedron = build_bricard1(len, base, labels, tol);
  const Configuration& c = out.octahedron.config;

  // p5 on the ray p1 -> p0 with |p5 pT| = |p1 pT| (and then |p5 pB| = |p1 pB|).
  const double tau = (p.a * p.a + p.c3 * p.c3 - cb2) / (2.0 * p.c3 * p.c3);
  const double scale = configuration_scale(c);
  if (!(2.0 * tau > 1.0 + tol.eps_len)) throw GeometryError("no extension point: p5 does not lie beyond p0");
  out.p5 = c.at("p1") + 2.0 * tau * (c.at("p0") - c.at("p1"));
  if (std::abs((out.p5 - c.at("pT")).norm() - p.a) > tol.eps_len * scale ||
      std::abs((out.p5 - c.at("pB")).norm() - p.b) > tol.eps_len * scale)
    throw GeometryError("no extension point: distances from p5 do not match");

  std::vector<Face> faces = {{"p2", "pT", "p1"}, {"p2", "p3", "pT"}, {"p2", "pB", "p3"},
                             {"p2", "p1", "pB"}, {"p5", "p1", "pT"}, {"p5", "pB", "p1"},
                             {"p0", "p5", "pT"}, {"p0", "pT", "p3"}, {"p0", "p3", "pB"},
                             {"p0", "pB", "p5"}};
  Configuration ext = c;
  ext["p5"] = out.p5;
  out.extended = {TriMesh({"p1", "pT", "p3", "pB", "p2", "p0", "p5"}, std::move(faces)), ext};

  const SurfaceQuad quad{{ExistingVertex{"p5"}, ExistingVertex{"pT"}, ExistingVertex{"p3"},
                          ExistingVertex{"pB"}}};
  SurgeryOptions opt;
  opt.moving_vertex = "p0";
  opt.rename = {{"p0", "p4"}};
  out.bipyramid = cut_and_twist(out.extended, quad, opt, tol);
  return out;
}

}  // namespace polyflex
