// Analytic and empirical laws: CDF/quantile contracts, t1 quadrature against a
// high-precision oracle, seeded sampling.

#include <catch_amalgamated.hpp>

#include <cmath>
#include <vector>

#include "stochord/distributions.hpp"
#include "stochord/errors.hpp"
#include "stochord/numeric.hpp"

using namespace stochord;
using Catch::Approx;

namespace {

std::vector<DistributionModel> analytic_models() {
  return {DistributionModel::normal(0, 1),
          DistributionModel::normal(100, 10),
          DistributionModel::noncentral_t1(0.167),
          DistributionModel::noncentral_t1(0.0),
          DistributionModel::mixture({{.02, -4, 3}, {.98, 1, 1}}),
          DistributionModel::mixture({{.1, -5, 1.75}, {.9, 1, 1}}),
          DistributionModel::piecewise_linear_quantile(
              {{0, 1.0 / 3, -0.1, 1.0 / 3 - 0.1}, {1.0 / 3, 2.0 / 3, 1.0 / 3, 2.0 / 3}, {2.0 / 3, 1, 0.7666, 1.1}})};
}

}  // namespace

TEST_CASE("cdf_eval examples", "[distributions][cdf]") {
  CHECK(DistributionModel::normal(0, 1).cdf(0.0) == 0.5);
  // 0.02 Phi(5/3) + 0.49 evaluated with mpmath at 30 digits.
  CHECK(DistributionModel::mixture({{.02, -4, 3}, {.98, 1, 1}}).cdf(1.0) ==
        Approx(0.5090441929545437).margin(1e-12));
  CHECK(DistributionModel::empirical({1.0, 3.0, 5.0}).cdf(3.0) == Approx(2.0 / 3.0).margin(0));
}

TEST_CASE("noncentral t1 CDF matches high-precision quadrature", "[distributions][t1]") {
  // E[Phi(x|W| - ncp)] integrated with mpmath at 30 digits.
  struct Row {
    double x, ncp, expected;
  };
  const Row rows[] = {{0, 0.167, 0.43368502446238377}, {1, 0.5, 0.59274773644002936},
                      {-3, 0.167, 0.08268591247164931}, {25, 0, 0.98727438865200817},
                      {-0.4, 2.0, 0.011822313285627019}, {13, 0.5, 0.95728766309488219}};
  for (const auto& r : rows) {
    INFO("x=" << r.x << " ncp=" << r.ncp);
    CHECK(DistributionModel::noncentral_t1(r.ncp).cdf(r.x) == Approx(r.expected).margin(1e-10));
  }
  // ncp = 0 is the Cauchy law.
  const auto cauchy = DistributionModel::noncentral_t1(0.0);
  for (double x : {-50.0, -2.0, 0.3, 7.0})
    CHECK(cauchy.cdf(x) == Approx(0.5 + std::atan(x) / 3.141592653589793).margin(1e-10));
  CHECK(cauchy.quantile(0.975) == Approx(std::tan(3.141592653589793 * 0.475)).margin(1e-9));
  CHECK(DistributionModel::noncentral_t1(0.5).density(1.0) == Approx(0.22501149476424658).margin(1e-9));
}

TEST_CASE("quantile_eval examples", "[distributions][quantile]") {
  CHECK(DistributionModel::normal(0, 1).quantile(0.5) == Approx(0.0).margin(1e-14));
  CHECK(DistributionModel::empirical({1.0, 3.0, 5.0}).quantile(0.5) == 3.0);
  CHECK(DistributionModel::normal(100, 10).quantile(0.975) == Approx(119.59963984540054).margin(1e-10));
  CHECK_THROWS_AS(DistributionModel::normal(0, 1).quantile(0.0), DomainError);
  CHECK_THROWS_AS(DistributionModel::normal(0, 1).quantile(1.0), DomainError);
  CHECK_THROWS_AS(DistributionModel::empirical({1.0}).quantile(1.5), DomainError);
}

TEST_CASE("empirical quantile is the brute-force generalized inverse", "[distributions][quantile]") {
  const std::vector<double> values{4.0, -1.0, 2.5, 2.5, 9.0, 0.0, 7.5};
  const auto emp = DistributionModel::empirical(values);
  for (int j = 1; j < 1000; ++j) {
    const double t = j / 1000.0;
    // inf{x : t <= Fn(x)} over the candidate points
    double brute = 1e300;
    for (double x : values)
      if (t <= emp.cdf(x)) brute = std::min(brute, x);
    REQUIRE(emp.quantile(t) == brute);
  }
}

TEST_CASE("parameter validation", "[distributions][errors]") {
  CHECK_THROWS_AS(DistributionModel::normal(0, 0), ParameterError);
  CHECK_THROWS_AS(DistributionModel::normal(0, -1), ParameterError);
  CHECK_THROWS_AS(DistributionModel::mixture({{.5, 0, 1}, {.4, 1, 1}}), ParameterError);
  CHECK_THROWS_AS(DistributionModel::mixture({{.5, 0, 1}, {.5, 1, 0}}), ParameterError);
  CHECK_NOTHROW(DistributionModel::mixture({{.3, 0, 1}, {.7, 1, 1}}));
  CHECK_THROWS_AS(DistributionModel::piecewise_linear_quantile({{0, 0.5, 0, 1}}), ParameterError);
  CHECK_THROWS_AS(DistributionModel::piecewise_linear_quantile({{0, 0.5, 0, 1}, {0.5, 1, 0.5, 2}}),
                  ParameterError);
  CHECK_THROWS_AS(DistributionModel::normal(0, 1).sample(0, {}), DomainError);
}

TEST_CASE("duality t <= F(x) iff Q(t) <= x", "[distributions][property]") {
  RandomStream rng(SeedSpec{77, 0});
  auto models = analytic_models();
  models.push_back(DistributionModel::empirical({1.0, 3.0, 3.0, 5.0, 8.0}));
  for (const auto& model : models) {
    INFO(model.describe());
    const auto [lo, hi] = model.effective_support(1e-4);
    for (int i = 0; i < 10000; ++i) {
      const double t = rng.uniform();
      const double x = lo + (hi - lo) * (1.2 * rng.uniform() - 0.1);
      REQUIRE((t <= model.cdf(x)) == (model.quantile(t) <= x));
    }
  }
}

TEST_CASE("CDF is monotone with the right limits", "[distributions][property]") {
  for (const auto& model : analytic_models()) {
    INFO(model.describe());
    const auto [lo, hi] = model.effective_support(1e-6);
    double prev = 0.0;
    for (int i = 0; i <= 2000; ++i) {
      const double c = model.cdf(lo + (hi - lo) * i / 2000.0);
      REQUIRE(c >= prev);
      prev = c;
    }
    CHECK(model.cdf(-1e12) < 1e-6);
    CHECK(model.cdf(1e12) > 1 - 1e-6);
  }
}

TEST_CASE("quantile round trip for continuous models", "[distributions][property]") {
  for (const auto& model : analytic_models()) {
    INFO(model.describe());
    for (int i = 1; i <= 999; ++i) {
      const double t = i / 1000.0;
      REQUIRE(std::abs(model.cdf(model.quantile(t)) - t) <= 1e-8);
    }
  }
}

TEST_CASE("empirical quantile of the probability transform", "[distributions][property]") {
  const auto model = DistributionModel::normal(3, 2);
  const auto xs = model.sample(257, SeedSpec{5, 1});
  std::vector<double> us;
  for (double x : xs) us.push_back(model.cdf(x));
  const EmpiricalDistribution fn(xs);
  const EmpiricalDistribution hn(us);
  for (int j = 1; j <= 1000; ++j) {
    const double t = j / 1000.0;
    REQUIRE(hn.quantile(t) == model.cdf(fn.quantile(t)));
  }
}

TEST_CASE("sampling is seeded and consistent", "[distributions][sample]") {
  const auto normal = DistributionModel::normal(0, 1);
  constexpr std::size_t n = 100000;
  const auto a = normal.sample(n, SeedSpec{11, 3});
  const auto b = normal.sample(n, SeedSpec{11, 3});
  CHECK(a == b);
  CHECK(a != normal.sample(n, SeedSpec{11, 4}));
  CHECK(std::abs(mean_sd(a).mean) < 4.0 / std::sqrt(static_cast<double>(n)));

  // DKW: P(sup |Fn - F| > eps) <= 2 exp(-2 n eps^2); eps = 0.01 gives < 1e-8.
  const auto mix = DistributionModel::mixture({{.02, -4, 3}, {.98, 1, 1}});
  const auto ms = mix.sample(n, SeedSpec{11, 5});
  CHECK(ks_distance(ms, [&](double x) { return mix.cdf(x); }) < 0.01);

  const auto t1 = DistributionModel::noncentral_t1(0.167);
  const auto ts = t1.sample(n, SeedSpec{11, 6});
  CHECK(ks_distance(ts, [&](double x) { return t1.cdf(x); }) < 0.01);

  // ncp = 0 is symmetric about zero: X and -X agree in law.
  const auto sym = DistributionModel::noncentral_t1(0.0).sample(n, SeedSpec{11, 7});
  std::vector<double> neg;
  for (double v : sym) neg.push_back(-v);
  CHECK(ks_distance(sym, neg) < 1.95 * std::sqrt(2.0 / n));

  const auto pw = analytic_models().back();
  const auto ps = pw.sample(n, SeedSpec{11, 8});
  CHECK(ks_distance(ps, [&](double x) { return pw.cdf(x); }) < 0.01);
}

TEST_CASE("empirical_from_sample", "[distributions][empirical]") {
  const auto e = empirical_from_sample({3.0, 1.0, 2.0});
  CHECK(std::vector<double>(e.values().begin(), e.values().end()) == std::vector<double>{1.0, 2.0, 3.0});
  CHECK_FALSE(e.has_ties());
  CHECK(empirical_from_sample({1.0, 1.0, 2.0}).has_ties());
  const auto single = empirical_from_sample({7.0});
  CHECK(single.cdf(7.0 - 1e-9) == 0.0);
  CHECK(single.cdf(7.0) == 1.0);
  CHECK(single.cdf_left(7.0) == 0.0);
  CHECK_THROWS_AS(empirical_from_sample({}), DomainError);
}
