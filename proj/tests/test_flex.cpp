#include "doctest.h"
#include "oracle.hpp"
#include "polyflex/constructions.hpp"
#include "polyflex/flex.hpp"

using namespace polyflex;

namespace {

Realization random_octahedron(std::mt19937_64& rng) {
  const TriMesh m = oracle::octahedron_topology();
  Configuration c;
  for (const auto& l : m.vertices()) c[l] = oracle::random_point(rng);
  return {m, c};
}

const DodecBuild& default_build() {
  static const DodecBuild b = build_dodecahedron(DodecParams::defaults());
  return b;
}

}  // namespace

TEST_CASE("residual") {
  const auto t = oracle::tetrahedron();
  const Linkage link = Linkage::from_realization(t.mesh, t.config);
  CHECK(residual(link, t.config).cwiseAbs().maxCoeff() < 1e-14);
  Configuration scaled;
  for (const auto& [l, p] : t.config) scaled[l] = 1.5 * p;
  const Eigen::VectorXd r = residual(link, scaled);
  for (std::size_t k = 0; k < link.edges.size(); ++k)
    CHECK(r[k] == doctest::Approx((1.5 * 1.5 - 1) * link.lengths[k] * link.lengths[k]));
  CHECK(max_length_error(link, scaled) == doctest::Approx(0.5 * *std::max_element(link.lengths.begin(), link.lengths.end())));
}

TEST_CASE("rigidity matrix is half the finite-difference Jacobian") {
  std::mt19937_64 rng(17);
  for (int trial = 0; trial < 20; ++trial) {
    const Realization o = random_octahedron(rng);
    Linkage link = Linkage::from_realization(o.mesh, o.config);
    for (double& l : link.lengths) l *= 0.9;  // off the variety
    const Eigen::MatrixXd R = rigidity_matrix(link, o.config);
    REQUIRE(R.rows() == 12);
    REQUIRE(R.cols() == 18);
    const double h = 1e-6;
    for (std::size_t v = 0; v < link.vertices.size(); ++v)
      for (int d = 0; d < 3; ++d) {
        Configuration plus = o.config, minus = o.config;
        plus[link.vertices[v]][d] += h;
        minus[link.vertices[v]][d] -= h;
        const Eigen::VectorXd fd = (residual(link, plus) - residual(link, minus)) / (2 * h);
        const Eigen::VectorXd col = 2.0 * R.col(3 * v + d);
        CHECK((fd - col).norm() <= 1e-6 * std::max(1.0, col.norm()));
      }
  }
}

TEST_CASE("ranks of small frameworks") {
  Linkage bar;
  bar.vertices = {"u", "v"};
  bar.edges = {Edge::make("u", "v")};
  bar.lengths = {1.0};
  const Configuration c2 = {{"u", {0, 0, 0}}, {"v", {1, 0, 0}}};
  Eigen::FullPivLU<Eigen::MatrixXd> lu(rigidity_matrix(bar, c2));
  CHECK(lu.rank() == 1);

  const auto t = oracle::tetrahedron();
  Eigen::FullPivLU<Eigen::MatrixXd> lt(rigidity_matrix(Linkage::from_realization(t.mesh, t.config), t.config));
  CHECK(lt.rank() == 6);
  CHECK(flex_dimension(t.mesh, t.config) == 0);
}

TEST_CASE("flex dimension") {
  std::mt19937_64 rng(23);
  for (int trial = 0; trial < 20; ++trial) {
    const Realization o = random_octahedron(rng);
    CHECK(flex_dimension(o.mesh, o.config) == 0);
  }
  const auto& b = default_build();
  CHECK(flex_dimension(b.octahedron.mesh, b.octahedron.config) == 1);
  CHECK(flex_dimension(b.dodecahedron.mesh, b.dodecahedron.config) == 1);

  auto flat = oracle::regular_octahedron();
  flat.config["n"].z() = 0;
  flat.config["s"].z() = 0;
  flat.config["n"].x() = 0.3;
  flat.config["s"].y() = 0.4;
  CHECK_THROWS_WITH_AS(flex_dimension(flat.mesh, flat.config), doctest::Contains("span deficient"), GeometryError);
}

TEST_CASE("driving selector names") {
  const DrivingSelector d = DrivingSelector::dihedral_at("B", "A'");
  CHECK(DrivingSelector::parse(d.name()).name() == d.name());
  const DrivingSelector e = DrivingSelector::distance_between("A", "A'");
  CHECK(DrivingSelector::parse(e.name()).kind == DrivingSelector::Kind::distance);
  CHECK_THROWS_AS(DrivingSelector::parse("angle:A-B"), GeometryError);
  const auto& b = default_build();
  CHECK(driving_value(b.dodecahedron.mesh, b.dodecahedron.config, e) ==
        doctest::Approx((b.dodecahedron.config.at("A") - b.dodecahedron.config.at("A'")).norm()));
}

TEST_CASE("rigid input is rejected") {
  const auto t = oracle::tetrahedron();
  CHECK_THROWS_WITH_AS(continue_flex(t.mesh, t.config, DrivingSelector::dihedral_at("a", "b")),
                       doctest::Contains("not flexible"), GeometryError);
  CHECK_THROWS_AS(range_of_motion(t.mesh, t.config, DrivingSelector::dihedral_at("a", "b")), GeometryError);
}

TEST_CASE("octahedron flex keeps zero volume and all lengths") {
  const auto& b = default_build();
  StepControl sc;
  sc.max_samples = 60;
  const FlexTrajectory t = continue_flex(b.octahedron.mesh, b.octahedron.config, dodecahedron_driving(), sc);
  REQUIRE(t.samples.size() > 20);
  const double scale = configuration_scale(b.octahedron.config);
  const auto target = edge_lengths(b.octahedron.mesh, b.octahedron.config);
  for (const FlexSample& s : t.samples) {
    CHECK(std::abs(signed_volume(b.octahedron.mesh, s.config)) < 1e-8 * scale * scale * scale);
    for (const auto& [name, l] : edge_lengths(b.octahedron.mesh, s.config))
      CHECK(std::abs(l - target.at(name)) < 1e-9 * scale);
  }
  for (std::size_t i = 1; i < t.samples.size(); ++i) CHECK(t.samples[i - 1].arc < t.samples[i].arc);
}

TEST_CASE("dodecahedron flex") {
  const auto& b = default_build();
  const auto& r = b.dodecahedron;
  const FlexTrajectory t = continue_flex(r.mesh, r.config, dodecahedron_driving());
  REQUIRE(t.samples.size() >= 50);
  CHECK(t.start_embedded);
  const double scale = configuration_scale(r.config);
  const auto target = edge_lengths(r.mesh, r.config);
  for (const FlexSample& s : t.samples) {
    CHECK(s.intersections == 0);
    CHECK(s.volume == doctest::Approx(b.tent_volume).epsilon(1e-9));
    for (const auto& [name, l] : edge_lengths(r.mesh, s.config)) CHECK(std::abs(l - target.at(name)) < 1e-9 * scale);
  }
  const RangeOfMotion rom = range_of_motion(t);
  CHECK(rom.total_variation > 0);
  CHECK(rom.lo < rom.hi);
  CHECK(rom.total_variation >= rom.hi - rom.lo - 1e-12);

  // deterministic
  const FlexTrajectory again = continue_flex(r.mesh, r.config, dodecahedron_driving());
  REQUIRE(again.samples.size() == t.samples.size());
  for (std::size_t i = 0; i < t.samples.size(); ++i) CHECK(again.samples[i].s == t.samples[i].s);
}

TEST_CASE("continuation is reversible") {
  const auto& r = default_build().dodecahedron;
  FlexStepper st(r.mesh, r.config);
  const double h = 0.005 * st.scale();
  const int k = 10;
  for (int i = 0; i < k; ++i) REQUIRE(st.step(h));
  const Configuration far = st.configuration();
  double moved = 0;
  for (const auto& [l, p] : far) moved = std::max(moved, (p - r.config.at(l)).norm());
  CHECK(moved > 1e-3);
  for (int i = 0; i < k; ++i) REQUIRE(st.step(-h));
  const Configuration back = st.configuration();
  // compare after removing the gauge: edge lengths and all pairwise distances
  for (const auto& [a, pa] : back)
    for (const auto& [c, pc] : back)
      CHECK(std::abs((pa - pc).norm() - (r.config.at(a) - r.config.at(c)).norm()) < 1e-6 * st.scale());
}

TEST_CASE("quadrilateral degrees of freedom") {
  std::mt19937_64 rng(31);
  for (int trial = 0; trial < 50; ++trial) {
    const Point3 a = oracle::random_point(rng), b = oracle::random_point(rng), c = oracle::random_point(rng),
                 d = oracle::random_point(rng);
    CHECK(quad_dof_check(a, b, c, d) == 2);
  }
}
