#include <doctest.h>

#include <sstream>

#include "sps/config.hpp"
#include "sps/errors.hpp"
#include "sps/report.hpp"
#include "sps/sweep.hpp"

using namespace sps;

namespace {

RunConfig parse(const std::string& text) {
  std::istringstream in(text);
  return parse_config(in);
}

}  // namespace

TEST_CASE("config parsing") {
  const auto rc = parse(
      "# comment\n"
      "gamma = 1\n"
      "a = -1   # trailing\n"
      "p = 5\n"
      "\n"
      "c_values = 0.5, 1, 2\n"
      "n = 2048\n"
      "spacing = uniform\n"
      "adapt_domain = false\n"
      "branch = global\n"
      "output = /tmp/x\n");
  CHECK(rc.sweep.params.a == -1.0);
  CHECK(rc.sweep.params.p == 5.0);
  CHECK(rc.sweep.c_values == std::vector<double>{0.5, 1.0, 2.0});
  CHECK(rc.sweep.solver.n == 2048);
  CHECK(rc.sweep.solver.spacing == Spacing::uniform);
  CHECK_FALSE(rc.sweep.solver.adapt_domain);
  CHECK(rc.branch == "global");
  CHECK(rc.sweep.output == "/tmp/x");
}

TEST_CASE("config errors") {
  CHECK_THROWS_AS(parse("gama = 1\n"), InvalidConfig);
  CHECK_THROWS_AS(parse("p = 4\np = 5\n"), InvalidConfig);
  CHECK_THROWS_AS(parse("p = four\n"), InvalidConfig);
  CHECK_THROWS_AS(parse("p = 7\n"), InvalidConfig);
  CHECK_THROWS_AS(parse("c_values = 1, 0.5\n"), InvalidConfig);
  CHECK_THROWS_AS(parse("n = -3\n"), InvalidConfig);
  CHECK_THROWS_AS(parse("spacing = cubic\n"), InvalidConfig);
  CHECK_THROWS_AS(parse("branch = sideways\n"), InvalidConfig);
  CHECK_THROWS_AS(parse("gamma\n"), InvalidConfig);
  CHECK_THROWS_AS(load_config("/nonexistent/run.cfg"), InvalidConfig);
}

TEST_CASE("sweep is deterministic across thread counts") {
  SweepSpec s;
  s.params = {1, 1, 4, 1};
  s.points = 4;
  s.solver.n = 1024;
  s.continuity = false;
  s.fit_exclude = 1;
  s.threads = 1;
  const auto a = run_sweep(s);
  s.threads = 4;
  const auto b = run_sweep(s);
  CHECK(to_json(a).dump() == to_json(b).dump());
  REQUIRE(a.points.size() == 4);
  CHECK(a.two_branch);
  for (const auto& p : a.points) {
    CHECK(p.plus.ok);
    CHECK(p.minus.ok);
    CHECK(p.plus.energy < p.minus.energy);
  }
  CHECK(a.gamma_minus_decreasing.size() == 3);
  CHECK(a.lambda_minus_fit.points == 3);
}

TEST_CASE("sweep records per-point failures and continues") {
  SweepSpec s;
  s.params = {1, 1, 4, 1};
  s.solver.n = 1024;
  s.continuity = false;
  const double c1 = compute_constants(s.params).c1;
  s.c_values = {0.3 * c1, 1.2 * c1};
  const auto r = run_sweep(s);
  CHECK(r.points[0].plus.ok);
  CHECK_FALSE(r.points[1].plus.ok);
  CHECK_FALSE(r.points[1].plus.error.empty());
}

TEST_CASE("sweep rejects invalid specs") {
  SweepSpec s;
  s.params = {-1, -1, 4, 1};
  CHECK_THROWS_AS(run_sweep(s), InvalidConfig);
  s.params = {1, 1, 4, 1};
  s.c_values = {2.0, 1.0};
  CHECK_THROWS_AS(run_sweep(s), InvalidConfig);
}

TEST_CASE("regime table rows") {
  SolverConfig cfg;
  cfg.n = 1024;
  const auto rows = regime_table({{1, 1, 4, 0.5, true}, {1, -1, 5, 1.0, false}, {-1, -1, 4, 1.0, false}}, cfg);
  REQUIRE(rows.size() == 3);
  CHECK(rows[0].predicted == "two solutions");
  CHECK(rows[1].predicted == "global min");
  CHECK(rows[2].predicted == "none");
  for (const auto& r : rows) CHECK_MESSAGE(r.match, r.observed << " " << r.detail);
}

TEST_CASE("json documents omit non-finite numbers and clocks") {
  SharpConstants k = thresholds({1, -1, 5, 1}, 0.01, 0.65);
  const auto j = to_json(k);
  CHECK(j["c1"].is_null());
  const auto doc = document(Json::object(), j);
  CHECK(doc["environment"].contains("isa"));
  CHECK(doc.dump() == document(Json::object(), j).dump());
}
