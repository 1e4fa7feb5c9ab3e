#include <thread>
#include <unistd.h>

#include "doctest.h"
#include "polyflex/io.hpp"
#include "polyflex/service.hpp"
// after Eigen: the resolver headers define _res
#include "httplib.h"

using namespace polyflex;

namespace {

Json body(const ServiceResponse& r) { return Json::parse(r.body); }

std::string params_body(const DodecParams& p, Json extra = Json::object()) {
  extra["params"] = params_to_json(p);
  return extra.dump();
}

}  // namespace

TEST_CASE("health and routing") {
  const ServiceResponse h = handle_request("GET", "/health", "");
  CHECK(h.status == 200);
  CHECK(body(h)["status"] == "ok");
  CHECK(handle_request("POST", "/health", "").status == 405);
  CHECK(handle_request("GET", "/build", "").status == 405);
  CHECK(handle_request("GET", "/nowhere", "").status == 404);
}

TEST_CASE("build endpoint") {
  const ServiceResponse r = handle_request("POST", "/build", params_body(DodecParams::defaults()));
  REQUIRE(r.status == 200);
  const Json j = body(r);
  CHECK(j["mesh"]["vertices"].size() == 8);
  CHECK(j["mesh"]["faces"].size() == 12);
  CHECK(j["diagnostics"]["intersecting_pairs"].empty());
  CHECK(j["diagnostics"]["flex_dimension"] == 1);
  // bare params are accepted as well, with identical output
  const ServiceResponse bare = handle_request("POST", "/build", params_to_json(DodecParams::defaults()).dump());
  CHECK(bare.body == r.body);
}

TEST_CASE("request errors") {
  const ServiceResponse bad_json = handle_request("POST", "/build", "{\"params\": ");
  CHECK(bad_json.status == 400);
  Json p = params_to_json(DodecParams::defaults());
  p["l"][0] = -3;
  const ServiceResponse bad_params = handle_request("POST", "/build", Json{{"params", p}}.dump());
  CHECK(bad_params.status == 400);
  CHECK(body(bad_params)["stage"] == "params");
  DodecParams inf = DodecParams::defaults();
  inf.l1 = 10;
  const ServiceResponse infeasible = handle_request("POST", "/build", params_body(inf));
  CHECK(infeasible.status == 422);
  CHECK(body(infeasible)["stage"] == "derive_xy");
  CHECK(handle_request("POST", "/flex", params_body(DodecParams::defaults(), {{"max_samples", 0}})).status == 400);
  CHECK(handle_request("POST", "/sample", params_body(DodecParams::defaults())).status == 400);
}

TEST_CASE("flex and sample endpoints") {
  const ServiceResponse f = handle_request("POST", "/flex", params_body(DodecParams::defaults(), {{"max_samples", 30}}));
  REQUIRE(f.status == 200);
  const Json t = body(f);
  CHECK(t["samples"].size() <= 61);
  CHECK(t["samples"].size() > 10);
  const double lo = t["range"]["lo"], hi = t["range"]["hi"];
  CHECK(lo < hi);

  const double s = 0.3 * lo + 0.7 * hi;
  const ServiceResponse one = handle_request("POST", "/sample", params_body(DodecParams::defaults(), {{"max_samples", 30}, {"s", s}}));
  REQUIRE(one.status == 200);
  const Json j = body(one);
  CHECK(j["s"].get<double>() == doctest::Approx(s).epsilon(1e-9));
  CHECK(j["intersections"] == 0);
  CHECK(j["max_residual"].get<double>() < 1e-9);

  const ServiceResponse out = handle_request("POST", "/sample", params_body(DodecParams::defaults(), {{"max_samples", 30}, {"s", hi + 1.0}}));
  CHECK(out.status == 422);
}

TEST_CASE("responses are byte-identical, also under concurrency") {
  const std::string req = params_body(DodecParams::wide_range());
  const std::string ref = handle_request("POST", "/build", req).body;
  std::vector<std::string> got(4);
  std::vector<std::thread> th;
  for (int i = 0; i < 4; ++i) th.emplace_back([&, i] { got[i] = handle_request("POST", "/build", req).body; });
  for (auto& t : th) t.join();
  for (const auto& g : got) CHECK(g == ref);
}

TEST_CASE("http front end") {
  const int port = 20000 + static_cast<int>(getpid() % 20000);
  std::thread([port] {
    try {
      serve("127.0.0.1", port);
    } catch (...) {
    }
  }).detach();
  httplib::Client cli("127.0.0.1", port);
  cli.set_connection_timeout(2);
  httplib::Result res;
  for (int attempt = 0; attempt < 50 && !res; ++attempt) {
    res = cli.Get("/health");
    if (!res) std::this_thread::sleep_for(std::chrono::milliseconds(50));
  }
  REQUIRE(res);
  CHECK(res->status == 200);
  CHECK(res->get_header_value("Access-Control-Allow-Origin") == "*");
  const auto b = cli.Post("/build", params_body(DodecParams::defaults()), "application/json");
  REQUIRE(b);
  CHECK(b->status == 200);
}
