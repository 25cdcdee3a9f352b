// Counter-based RNG streams: known-answer vectors, determinism, stream independence.

#include <catch_amalgamated.hpp>

#include <cmath>
#include <set>
#include <vector>

#include "stochord/numeric.hpp"
#include "stochord/random.hpp"

using namespace stochord;

TEST_CASE("philox4x32-10 known answers", "[random]") {
  // Random123 kat_vectors.
  CHECK(philox4x32({0, 0, 0, 0}, {0, 0}) ==
        std::array<std::uint32_t, 4>{0x6627e8d5u, 0xe169c58du, 0xbc57ac4cu, 0x9b00dbd8u});
  CHECK(philox4x32({0xffffffffu, 0xffffffffu, 0xffffffffu, 0xffffffffu}, {0xffffffffu, 0xffffffffu}) ==
        std::array<std::uint32_t, 4>{0x408f276du, 0x41c83b0eu, 0xa20bc7c6u, 0x6d5451fdu});
  CHECK(philox4x32({0x243f6a88u, 0x85a308d3u, 0x13198a2eu, 0x03707344u}, {0xa4093822u, 0x299f31d0u}) ==
        std::array<std::uint32_t, 4>{0xd16cfe09u, 0x94fdccebu, 0x5001e420u, 0x24126ea1u});
}

TEST_CASE("streams are deterministic and distinct", "[random]") {
  const SeedSpec spec{42, 7};
  RandomStream a(spec);
  RandomStream b(spec);
  RandomStream c(SeedSpec{42, 8});
  int same_as_other_stream = 0;
  for (int i = 0; i < 1000; ++i) {
    const auto x = a();
    REQUIRE(x == b());
    same_as_other_stream += x == c();
  }
  CHECK(same_as_other_stream < 3);

  std::set<std::uint64_t> children;
  for (std::uint64_t i = 0; i < 10000; ++i) children.insert(spec.substream(i).stream);
  CHECK(children.size() == 10000);
  CHECK(spec.substream(3) == spec.substream(3));
  CHECK(spec.substream(3).seed == spec.seed);
}

TEST_CASE("uniform and normal draws have the right moments", "[random]") {
  RandomStream rng(SeedSpec{2024, 0});
  constexpr int n = 200000;
  std::vector<double> u(n);
  std::vector<double> z(n);
  for (int i = 0; i < n; ++i) {
    u[i] = rng.uniform();
    REQUIRE(u[i] > 0.0);
    REQUIRE(u[i] < 1.0);
  }
  for (int i = 0; i < n; ++i) z[i] = rng.normal();
  const auto mu = mean_sd(u);
  CHECK(std::abs(mu.mean - 0.5) < 4.0 * std::sqrt(1.0 / 12.0 / n));
  const auto mz = mean_sd(z);
  CHECK(std::abs(mz.mean) < 4.0 / std::sqrt(n));
  CHECK(std::abs(mz.sd - 1.0) < 0.01);
  CHECK(ks_distance(z, normal_cdf) < 1.63 / std::sqrt(n));
}

TEST_CASE("below() is unbiased over a small range", "[random]") {
  RandomStream rng(SeedSpec{9, 1});
  std::vector<int> counts(7, 0);
  constexpr int n = 70000;
  for (int i = 0; i < n; ++i) ++counts[rng.below(7)];
  for (int c : counts) CHECK(std::abs(c - n / 7) < 4.0 * std::sqrt(n / 7.0));
}
