// Built-in scenarios, table cells and the asymptotic-law experiment.

#include <catch_amalgamated.hpp>

#include <cmath>

#include "stochord/errors.hpp"
#include "stochord/simharness.hpp"

using namespace stochord;
using Catch::Approx;

TEST_CASE("built-in scenarios carry their nominal gamma", "[scenario]") {
  const auto all = builtin_scenarios();
  REQUIRE(all.size() == 8);
  for (const auto& s : all) {
    INFO(s.name);
    CHECK(std::abs(verify_nominal_gamma(s) - s.nominal_gamma) < 4e-4);
  }
  CHECK(builtin_scenario(1, ScenarioFamily::t1).name == "case1-t1");
  CHECK(builtin_scenario(4, ScenarioFamily::mixture).name == "case4-mixture");
  CHECK_THROWS_AS(builtin_scenario(5, ScenarioFamily::t1), ParameterError);
  CHECK(parse_scenario_family("mixture") == ScenarioFamily::mixture);
  CHECK_THROWS_AS(parse_scenario_family("gamma"), ParameterError);

  const Scenario same{"same", DistributionModel::normal(0, 1), DistributionModel::normal(0, 1), 0.0};
  CHECK(verify_nominal_gamma(same) == 0.0);
}

TEST_CASE("table reference", "[table]") {
  CHECK(table1_reference().size() == 96);
  CHECK(table1_reference_value(ScenarioFamily::t1, 1, 0.05, 100) == Approx(0.142));
  CHECK(table1_reference_value(ScenarioFamily::mixture, 2, 0.10, 1000) == Approx(0.819));
  CHECK(table1_reference_value(ScenarioFamily::mixture, 4, 0.02, 100) == 0.0);
  CHECK_FALSE(table1_reference_value(ScenarioFamily::t1, 1, 0.3, 100));
}

TEST_CASE("table cells", "[table]") {
  const auto s = builtin_scenario(4, ScenarioFamily::mixture);
  const auto seed = table1_cell_seed(1, s, 0.02, 100);
  const auto r = run_table1_cell(s, 0.02, 100, 60, 60, 0.05, seed);
  CHECK(r.proportion == 0.0);  // gamma = 0.2 is far above 0.02
  CHECK(r.mc_se == 0.0);
  CHECK(r.reps == 60);

  const auto a = run_table1_cell(builtin_scenario(2, ScenarioFamily::t1), 0.1, 100, 80, 80, 0.05, {5, 0}, 1);
  const auto b = run_table1_cell(builtin_scenario(2, ScenarioFamily::t1), 0.1, 100, 80, 80, 0.05, {5, 0}, 4);
  CHECK(a.rejections == b.rejections);
  CHECK(a.mc_se == Approx(std::sqrt(a.proportion * (1 - a.proportion) / 80)));

  // rejections grow with the threshold
  const auto c1 = builtin_scenario(1, ScenarioFamily::mixture);
  double prev = -1;
  for (double g0 : kTable1Gamma0) {
    const auto res = run_table1_cell(c1, g0, 100, 100, 100, 0.05, {6, 0});
    CHECK(res.proportion >= prev);
    prev = res.proportion;
  }
  CHECK(table1_cell_seed(1, c1, 0.05, 100) != table1_cell_seed(1, c1, 0.05, 1000));
  CHECK(table1_cell_seed(1, c1, 0.05, 100) == table1_cell_seed(1, c1, 0.05, 100));
  CHECK_THROWS_AS(run_table1_cell(c1, 0.05, 100, 0, 10, 0.05, {1, 0}), DomainError);
}

TEST_CASE("asymptotic law experiment", "[limit]") {
  const auto f = DistributionModel::normal(0, 1);
  const auto g = DistributionModel::normal(0, 2);
  const auto r = asymptotic_law_experiment(f, g, 800, 800, 300, {3, 0});
  CHECK(r.variance == Approx(0.625).epsilon(1e-10));
  CHECK(r.gamma == Approx(0.5).margin(1e-12));
  CHECK(r.draws.size() == 300);
  REQUIRE(r.ks_distance);
  CHECK(*r.ks_distance < 0.1);
  CHECK(asymptotic_law_experiment(f, g, 800, 800, 30, {3, 0}, 3).draws ==
        std::vector<double>(r.draws.begin(), r.draws.begin() + 30));

  // dominance: nothing crosses, the plug-in is exactly zero most of the time
  const auto d = asymptotic_law_experiment(f, DistributionModel::normal(3, 1), 500, 500, 50, {4, 0});
  CHECK(d.variance == 0.0);
  CHECK(d.gamma == 0.0);
  CHECK_FALSE(d.ks_distance);
  for (double v : d.draws) CHECK(v >= 0.0);
}
