#include "doctest.h"
#include "polyflex/optimize.hpp"

using namespace polyflex;

TEST_CASE("evaluate") {
  const EvalResult d = evaluate(DodecParams::defaults());
  CHECK(d.feasible);
  CHECK(d.range > 0);
  CHECK(d.stage.empty());
  CHECK(d.min_triangle_quality > 0);
  const EvalResult again = evaluate(DodecParams::defaults());
  CHECK(again.range == d.range);
  CHECK(again.min_clearance == d.min_clearance);

  DodecParams bad = DodecParams::defaults();
  bad.l1 = 10;
  const EvalResult b = evaluate(bad);
  CHECK_FALSE(b.feasible);
  CHECK(b.range == 0);
  CHECK(b.stage == "derive_xy");
}

TEST_CASE("search never regresses and is reproducible") {
  const EvalResult seed = evaluate(DodecParams::defaults());
  SearchOptions opt;
  opt.budget = 8;
  opt.seed = 4;
  int calls = 0;
  opt.on_trial = [&](int i, const DodecParams& p, const EvalResult&, bool) {
    CHECK(i == calls++);
    CHECK(p.l3 == 1.0);
  };
  const SearchResult a = search(DodecParams::defaults(), opt);
  CHECK(calls == 9);
  CHECK(a.result.feasible);
  CHECK(a.result.range >= seed.range);
  CHECK(a.result.min_triangle_quality >= opt.quality_floor);
  opt.on_trial = nullptr;
  const SearchResult b = search(DodecParams::defaults(), opt);
  CHECK(b.result.range == a.result.range);
  CHECK(b.params.l1 == a.params.l1);
  CHECK(b.params.h3 == a.params.h3);
}

TEST_CASE("search contract") {
  SearchOptions opt;
  opt.budget = 0;
  CHECK_THROWS_AS(search(DodecParams::defaults(), opt), GeometryError);
  // a floor above the seed's own quality confines the search
  const EvalResult seed = evaluate(DodecParams::defaults());
  opt.budget = 4;
  opt.quality_floor = seed.min_triangle_quality * 1.5;
  try {
    const SearchResult r = search(DodecParams::defaults(), opt);
    CHECK(r.result.min_triangle_quality >= opt.quality_floor);
  } catch (const GeometryError& e) {
    CHECK(std::string(e.what()).find("no feasible parameters") != std::string::npos);
  }
}
