// Brownian bridge paths, occupation times and the non-consistency demo.

#include <catch_amalgamated.hpp>

#include <cmath>
#include <vector>

#include "stochord/bridge.hpp"
#include "stochord/errors.hpp"
#include "stochord/numeric.hpp"

using namespace stochord;
using Catch::Approx;

TEST_CASE("bridge paths", "[bridge]") {
  const auto p = bridge_path(2048, {1, 0});
  CHECK(p.grid_size() == 2048);
  CHECK(p[0] == 0.0);
  CHECK(p[2048] == 0.0);
  CHECK(p.at(0.0) == 0.0);
  CHECK(p.at(1.0) == 0.0);
  CHECK(p.at(0.5) == p[1024]);
  CHECK(p.at(1.5 / 2048) == Approx(0.5 * (p[1] + p[2])));
  CHECK(bridge_path(2048, {1, 0}).values() == p.values());
  CHECK(bridge_path(2048, {1, 1}).values() != p.values());
  CHECK_THROWS_AS(bridge_path(1, {1, 0}), DomainError);
  CHECK_THROWS_AS(bridge_path(1000, {1, 0}), DomainError);
  CHECK_NOTHROW(bridge_path(2, {1, 0}));
}

TEST_CASE("bridge covariance", "[bridge]") {
  const std::size_t paths = 10000;
  std::vector<double> mid(paths), a(paths), b(paths);
  for (std::size_t i = 0; i < paths; ++i) {
    const auto p = bridge_path(2048, SeedSpec{7, 0}.substream(i));
    mid[i] = p[1024];
    a[i] = p[512];
    b[i] = p[1536];
  }
  // Var B(1/2) = 1/4; the sample variance has sd about sqrt(2/N) * 1/4
  const double var = std::pow(mean_sd(mid).sd, 2);
  CHECK(std::abs(var - 0.25) < 4 * 0.25 * std::sqrt(2.0 / paths));

  // Cov(B(1/4), B(3/4)) = 1/16; sd of the product mean is
  // sqrt(Var(a)Var(b) + Cov^2) / sqrt(N)
  double cov = 0;
  for (std::size_t i = 0; i < paths; ++i) cov += a[i] * b[i];
  cov /= paths;
  const double se = std::sqrt(0.1875 * 0.1875 + 0.0625 * 0.0625) / std::sqrt(double(paths));
  CHECK(std::abs(cov - 0.0625) < 4 * se);
}

TEST_CASE("subset specs", "[bridge]") {
  const auto s = SubsetSpec::parse("0.1:0.3,1/2:0.7");
  CHECK(s.intervals().size() == 2);
  CHECK(s.length() == Approx(0.4));
  CHECK(s.contains(0.1));
  CHECK_FALSE(s.contains(0.3));
  CHECK(s.contains(0.5));
  CHECK_FALSE(s.contains(0.4));
  CHECK(SubsetSpec::parse("1/3:2/3").intervals()[0].lo == 1.0 / 3.0);
  CHECK(SubsetSpec::unit().length() == 1.0);
  CHECK_THROWS_AS(SubsetSpec::parse("0.1:0.5,0.4:0.6"), DomainError);
  CHECK_THROWS_AS(SubsetSpec::parse("0.1:1.5"), DomainError);
  CHECK_THROWS_AS(SubsetSpec::parse("0.1-0.3"), ParameterError);
  CHECK_THROWS_AS(SubsetSpec::parse("a:0.3"), ParameterError);
}

TEST_CASE("occupation time of the bridge is uniform", "[bridge]") {
  const auto occ = occupation_sample(10000, 2048, SubsetSpec::unit(), {2023, 0});
  CHECK(ks_distance(occ, [](double v) { return std::clamp(v, 0.0, 1.0); }) < 0.02);
  CHECK(mean_sd(occ).mean == Approx(0.5).margin(4 * std::sqrt(1.0 / 12 / 10000)));

  // B and -B have the same law
  std::vector<double> flipped(occ.size());
  const auto occ2 = occupation_sample(10000, 2048, SubsetSpec::unit(), {2023, 1});
  for (std::size_t i = 0; i < occ2.size(); ++i) flipped[i] = 1.0 - occ2[i];
  CHECK(ks_distance(occ, flipped) < 0.02);

  // same paths, any thread count
  CHECK(occupation_sample(300, 256, SubsetSpec::unit(), {5, 0}, 1) ==
        occupation_sample(300, 256, SubsetSpec::unit(), {5, 0}, 4));
}

TEST_CASE("restricted occupation", "[bridge]") {
  const SubsetSpec i40({{0.1, 0.3}, {0.5, 0.7}});
  const auto occ = occupation_sample(10000, 2048, i40, {99, 0});
  const auto ms = mean_sd(occ);
  CHECK(std::abs(ms.mean - 0.2) < 4 * ms.sd / 100.0);
  CHECK(ms.sd > 0.01);
  // 820 grid points fall inside the subset
  for (double v : occ) CHECK((v >= 0.0 && v <= 820.0 / 2048));

  const SubsetSpec i10({{0.45, 0.55}});
  CHECK(mean_sd(occupation_sample(2000, 2048, i10, {98, 0})).sd > 0.01);

  const SubsetSpec empty({{0.3, 0.3}});
  for (double v : occupation_sample(200, 2048, empty, {97, 0})) CHECK(v == 0.0);
  for (double v : occupation_sample(10, 2048, SubsetSpec{}, {97, 0})) CHECK(v == 0.0);
}

TEST_CASE("zero set of a bridge", "[bridge]") {
  for (std::uint64_t s = 0; s < 50; ++s) {
    const auto p = bridge_path(2048, {s, 3});
    std::size_t zeros = 0;
    for (double v : p.values()) zeros += std::abs(v) < 1e-12;
    CHECK(zeros <= 2);
  }
}

TEST_CASE("histogram", "[bridge]") {
  const auto h = histogram({-1.0, 0.05, 0.15, 0.15, 0.95, 2.0}, 0.0, 1.0, 10);
  REQUIRE(h.size() == 10);
  CHECK(h[0].count == 2);
  CHECK(h[1].count == 2);
  CHECK(h[9].count == 2);
  CHECK(h[9].hi == 1.0);
  CHECK(h[1].frequency == Approx(2.0 / 6.0));
  CHECK_THROWS_AS(histogram({}, 1.0, 0.0, 3), DomainError);
}

TEST_CASE("non-consistency demo", "[bridge]") {
  const auto [f, g] = coincident_quantile_pair(0.1);
  const auto grid = GridSpec::uniform(kStudyGridSize);
  CHECK(gamma_index(f, g, grid) == Approx(1.0 / 3.0).margin(1e-12));
  CHECK(g.quantile(0.2) == Approx(0.1));
  CHECK(g.quantile(0.5) == Approx(0.5));
  CHECK(g.quantile(0.9) == Approx(1.0));

  const auto s = nonconsistency_demo(f, g, 2000, 2000, 400, grid, {31, 0});
  CHECK_FALSE(s.degenerate);
  CHECK(s.coincidence_measure == Approx(1.0 / 3.0).margin(2e-4));
  CHECK(std::abs(s.mean - 1.0 / 6.0) < 4 * s.mc_se);
  CHECK(s.sd > 0.05);
  std::size_t total = 0;
  for (const auto& b : s.histogram) total += b.count;
  CHECK(total == 400);

  const auto again = nonconsistency_demo(f, g, 2000, 2000, 400, grid, {31, 0}, 4);
  CHECK(again.deviations == s.deviations);

  // single clean crossing: the demo degenerates to consistency
  const auto c = nonconsistency_demo(DistributionModel::normal(0, 1), DistributionModel::normal(0, 2), 5000, 5000,
                                     100, grid, {32, 0});
  CHECK(c.degenerate);
  CHECK(std::abs(c.mean) < 0.01);
  CHECK(c.sd < 0.03);
}
