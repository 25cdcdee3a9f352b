#pragma once

#include <array>
#include <cstdint>

namespace stochord {

/// Identifies one independent random stream: a master seed plus a stream
/// index. Every Monte Carlo replicate, bootstrap resample and bridge path is
/// drawn from its own stream, so results never depend on thread scheduling.
struct SeedSpec {
  std::uint64_t seed = 0;
  std::uint64_t stream = 0;

  /// Child stream keyed by `index`. Children of distinct parents or with
  /// distinct indices are distinct with overwhelming probability.
  [[nodiscard]] SeedSpec substream(std::uint64_t index) const noexcept;

  friend bool operator==(const SeedSpec&, const SeedSpec&) = default;
};

std::uint64_t splitmix64(std::uint64_t x) noexcept;

/// Philox4x32-10 block function (Salmon et al., Random123).
std::array<std::uint32_t, 4> philox4x32(std::array<std::uint32_t, 4> counter,
                                        std::array<std::uint32_t, 2> key) noexcept;

/// Counter-based generator over one SeedSpec. The key is the master seed and
/// the upper half of the counter is the stream index, so draw k of stream s
/// is a pure function of (seed, s, k).
class RandomStream {
 public:
  using result_type = std::uint32_t;

  explicit RandomStream(SeedSpec spec) noexcept;

  static constexpr result_type min() noexcept { return 0; }
  static constexpr result_type max() noexcept { return 0xFFFFFFFFu; }

  result_type operator()() noexcept;
  std::uint64_t next_u64() noexcept;

  /// Uniform on the open interval (0,1) with 53-bit resolution.
  double uniform() noexcept;
  /// Uniform integer in [0, n). Requires n > 0.
  std::uint64_t below(std::uint64_t n) noexcept;
  /// Standard normal via Box-Muller (both variates are used).
  double normal() noexcept;

 private:
  void refill() noexcept;

  std::array<std::uint32_t, 2> key_;
  std::uint64_t stream_;
  std::uint64_t block_ = 0;
  std::array<std::uint32_t, 4> buffer_{};
  int used_ = 4;
  bool has_spare_ = false;
  double spare_ = 0.0;
};

}  // namespace stochord
