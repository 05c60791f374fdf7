#include "ergo/harness.hpp"

#include <doctest.h>

using namespace ergo;

namespace {
const GammaSet both(1, {{1}, {2}});
const LatticeConfig zlin = LatticeConfig::make(1, 0, GammaSet(1, {{1}}));

ExperimentReport synthetic(const std::string& name, std::vector<SeriesPoint> series) {
  ExperimentReport r;
  r.experiment = name;
  r.series = std::move(series);
  return r;
}
}  // namespace

TEST_CASE("power law fit") {
  std::vector<double> x{1, 2, 4, 8, 16}, y;
  for (double v : x) y.push_back(3 * std::pow(v, -0.5));
  const auto f = fit_power_law("f", x, y);
  CHECK(f.exponent == doctest::Approx(-0.5).epsilon(1e-12));
  CHECK(f.constant == doctest::Approx(3).epsilon(1e-12));
  CHECK(f.residual <= 1e-12);
  CHECK_THROWS_AS(fit_power_law("g", {1, 2}, {0, 1}), ParameterError);
}

TEST_CASE("report serialization") {
  ExperimentReport r = synthetic("rm_check", {{1, 0.5, "a"}, {2, 0.7, "b"}});
  r.seed = 42;
  r.params = {{"p", 2}};
  r.fits.push_back({"fit", -0.5, 1, 0});
  r.verdicts = evaluate_verdicts(r);
  const nlohmann::json j = r;
  const auto back = j.get<ExperimentReport>();
  CHECK(back.seed == 42);
  CHECK(back.series.size() == 2);
  CHECK(back.series[1].label == "b");
  CHECK(back.verdicts.size() == 1);
  CHECK(back.verdicts[0].pass);
  CHECK(nlohmann::json(back) == j);
  const auto csv = to_csv(r);
  CHECK(csv.rfind("experiment,x,y,label\n", 0) == 0);
  CHECK(csv.find("rm_check,2") != std::string::npos);
}

TEST_CASE("verdicts from synthetic series") {
  auto jump = synthetic("jump_boundedness", {{8, 1, "seed 0"}, {16, 1.2, "seed 0"}, {32, 3, "seed 0"}});
  auto v = evaluate_verdicts(jump);
  REQUIRE(v.size() == 1);
  CHECK(v[0].criterion == "11");
  CHECK_FALSE(v[0].pass);
  CHECK(v[0].observed == doctest::Approx(2.5));

  auto weyl = synthetic("weyl_decay", {{1e3, 0.1, "convergent"}, {1e6, 0.04, "convergent"}});
  CHECK(evaluate_verdicts(weyl)[0].pass);

  auto sw = synthetic("sw_decay", {{1e3, 0.3, "q=1 r=1"}, {1e4, 0.35, "q=1 r=1"}, {1e5, 0.1, "q=1 r=1"},
                                   {1e6, 0.2, "q=1 r=1"}});
  v = evaluate_verdicts(sw);
  CHECK(v[0].pass == false);  // 0.2 > 0.05
  CHECK(v[1].observed == 2.0);

  auto iw = synthetic("iw_family", {{1, 1, "inclusion"}, {2, 0, "monotone"}, {2, 0.3, "lcm log ratio"}});
  CHECK_FALSE(evaluate_verdicts(iw)[0].pass);
  CHECK(evaluate_verdicts(synthetic("unknown", {})).empty());
}

TEST_CASE("small gauss and ramanujan runs") {
  const auto g = run_gauss_decay(LatticeConfig::make(1, 0, GammaSet(1, {{2}})), 61, true);
  REQUIRE(g.verdicts.size() == 2);
  CHECK(g.verdicts[0].pass);
  CHECK(g.fits.size() == 1);
  const auto r = run_gauss_decay(LatticeConfig::make(0, 1, GammaSet(1, {{1}})), 40, false);
  REQUIRE(r.verdicts.size() == 1);
  CHECK(r.verdicts[0].criterion == "4");
  CHECK(r.verdicts[0].pass);
  CHECK_THROWS_AS(run_gauss_decay(LatticeConfig::make(2, 0, build_gamma(2, 2)), 100, false), ResourceError);
}

TEST_CASE("small sw and weyl runs") {
  const auto s = run_sw_decay(3, {1e3, 1e4});
  CHECK(s.series.size() == 2 * (1 + 1 + 2));
  const auto w = run_weyl_decay(0.0, {1e3, 1e4});
  CHECK(w.labelled("convergent").size() == 2);
  CHECK(w.labelled("denominator")[0].y == 985);
}

TEST_CASE("small jump run") {
  const auto plan = ParameterPlan::make(2, 3, 0.4, 0.05, 6.25, 0.4, 1, 0.25, both);
  JumpOptions opt;
  opt.delta = true;
  const auto r = run_jump_boundedness(LatticeConfig::make(1, 0, both), Region::ball(1), plan, 2, 2, 16, 5, opt);
  CHECK(r.series.size() == 2 * 2);
  for (const auto& p : r.series) {
    CHECK(std::isfinite(p.y));
    CHECK(p.y > 0);
  }
  CHECK(r.verdicts.size() == 1);
}

TEST_CASE("short variation") {
  const auto r = run_short_variation(zlin, Region::ball(1), 0.5, 4, 9);
  const auto v = r.labelled("V1");
  REQUIRE(v.size() == 6);
  // N_4 = N_5 = 4: empty window
  CHECK(v[0].y == 0.0);
  for (const auto& p : r.labelled("ratio")) CHECK(std::isfinite(p.y));
}

TEST_CASE("small multiplier equivalence") {
  const auto h = CZKernel::riesz(1, 0);
  const auto r = run_multiplier_equivalence(LatticeConfig::make(1, 0, both), Region::ball(1), 9, 4, 3, &h);
  REQUIRE(r.verdicts.size() == 1);
  CHECK(r.verdicts[0].pass);
}

TEST_CASE("small rm and iw runs") {
  const auto rm = run_rm_check({2.0}, 2, 10, 1);
  CHECK(rm.verdicts[0].pass);
  const auto iw = run_iw_family(30, 30);
  CHECK(iw.verdicts[0].pass);
}

TEST_CASE("small telescoping run") {
  const auto plan = ParameterPlan::make(2, 3, 0.49, 0.05, 2.5 / 0.49, 0.4, 1, 0.25, both);
  const std::vector<TelescopingCase> cases{{LatticeConfig::make(1, 0, both)}};
  const auto r = run_telescoping(plan, both, 12, 40, 2, cases, 8, 2);
  REQUIRE(r.verdicts.size() == 2);
  CHECK(r.verdicts[0].pass);
  CHECK(r.verdicts[1].pass);
}

TEST_CASE("experiment registry") {
  CHECK(experiment_names().size() == 12);
  CHECK_THROWS_AS(default_experiment("nope", 1), ParameterError);
  const auto reports = run_experiments({"iw_family", "sw_decay"}, 1, 2);
  REQUIRE(reports.size() == 2);
  CHECK(reports[0].experiment == "iw_family");
  CHECK(reports[1].experiment == "sw_decay");
}
