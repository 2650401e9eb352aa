#include <doctest.h>

#include <sstream>

#include "angmom/verify.hpp"
#include "angmom/vsh.hpp"

using namespace angmom;

TEST_CASE("log-log slope of a power law") {
  std::vector<double> x, y;
  for (double v : {1.0, 2.0, 5.0, 11.0}) {
    x.push_back(v);
    y.push_back(3.0 * std::pow(v, -1.5));
  }
  CHECK(loglog_slope(x, y) == doctest::Approx(-1.5).epsilon(1e-12));
  CHECK_THROWS(loglog_slope({1.0}, {2.0}));
}

TEST_CASE("suite names and unknown suites") {
  const auto &n = suite_names();
  for (const char *s : {"algebraic", "spectral", "vsh", "paraxial", "com-crosscheck"})
    CHECK(std::find(n.begin(), n.end(), s) != n.end());
  CHECK_THROWS_AS(run_suite("nope", RunConfig{}), ConfigError);
}

TEST_CASE("algebraic suite passes and is reproducible for a seed") {
  RunConfig c;
  const auto a = run_suite("algebraic", c);
  const auto b = run_suite("algebraic", c);
  REQUIRE(a.size() == b.size());
  bool saw = false;
  for (std::size_t i = 0; i < a.size(); ++i) {
    CHECK(a[i].pass);
    CHECK(a[i].max_residual == b[i].max_residual);
    if (a[i].check == "S.S=hbar2") {
      saw = true;
      CHECK(a[i].max_residual < 1e-13);
    }
  }
  CHECK(saw);
  // a tolerance override is honoured
  c.tolerances["algebraic"] = 1e-300;
  bool any_fail = false;
  for (const auto &r : run_suite("algebraic", c)) any_fail |= !r.pass;
  CHECK(any_fail);
}

TEST_CASE("check JSON format") {
  std::vector<CheckResult> r(2);
  r[0] = {"x", 1e-15, 1e-13, true, std::nullopt};
  r[1] = {"order", 0.05, 0.2, true, 2.05};
  std::ostringstream out;
  write_checks_json(out, r);
  const json j = json::parse(out.str());
  REQUIRE(j.is_array());
  CHECK(j[0]["check"] == "x");
  CHECK(j[0]["pass"] == true);
  CHECK(j[0]["max_residual"].get<double>() == 1e-15);
  CHECK(j[0]["tolerance"].get<double>() == 1e-13);
  CHECK(j[1]["value"].get<double>() == 2.05);
}

TEST_CASE("random state helpers") {
  GridPtr g = build_grid({3, 1.0, 2.0, 8, 16});
  std::mt19937_64 r1(5), r2(5);
  const auto a = random_transverse_state(g, r1);
  const auto b = random_transverse_state(g, r2);
  CHECK(norm(a - b) == 0.0);
  CHECK(a.transversality_residual() < 1e-14);
  const auto c = random_bandlimited_state(g, 4, 6, r1);
  REQUIRE(c.spectral());
  CHECK(c.spectral()->l_max() == 6);
}
