#pragma once

#include <cstddef>
#include <string>
#include <utility>
#include <vector>

#include "stochord/distributions.hpp"
#include "stochord/indices.hpp"
#include "stochord/random.hpp"

namespace stochord {

inline constexpr std::size_t kDefaultBridgeGrid = 2048;

/// A standard Brownian bridge sampled at t_j = j/m, j = 0..m.
class BridgePath {
 public:
  explicit BridgePath(std::vector<double> values) : values_(std::move(values)) {}

  [[nodiscard]] std::size_t grid_size() const noexcept { return values_.size() - 1; }
  [[nodiscard]] const std::vector<double>& values() const noexcept { return values_; }
  [[nodiscard]] double operator[](std::size_t j) const { return values_[j]; }
  /// Linear interpolation between grid points; t is clamped to [0,1].
  [[nodiscard]] double at(double t) const noexcept;

 private:
  std::vector<double> values_;
};

/// W(t_j) - t_j W(1) for a Gaussian random walk W. m must be a power of two >= 2.
BridgePath bridge_path(std::size_t m, SeedSpec seed);

/// A finite union of disjoint half-open intervals [lo, hi) inside [0,1].
class SubsetSpec {
 public:
  struct Interval {
    double lo = 0.0;
    double hi = 1.0;
  };

  SubsetSpec() = default;
  /// Sorts and validates; throws DomainError on overlap or bounds outside [0,1].
  explicit SubsetSpec(std::vector<Interval> intervals);
  static SubsetSpec unit() { return SubsetSpec({Interval{0.0, 1.0}}); }
  /// Parses "a:b,c:d" where endpoints are decimals or fractions like 1/3.
  static SubsetSpec parse(const std::string& text);

  [[nodiscard]] const std::vector<Interval>& intervals() const noexcept { return intervals_; }
  [[nodiscard]] double length() const noexcept;
  [[nodiscard]] bool contains(double t) const noexcept;

 private:
  std::vector<Interval> intervals_;
};

/// (1/m) #{j : t_j in subset, B(t_j) > 0}.
double occupation_positive(const BridgePath& path, const SubsetSpec& subset);

/// Occupation times of `paths` independent bridges, path i drawn from seed.substream(i).
std::vector<double> occupation_sample(std::size_t paths, std::size_t m, const SubsetSpec& subset, SeedSpec seed,
                                      unsigned threads = 1);

struct HistogramBin {
  double lo = 0.0;
  double hi = 0.0;
  std::size_t count = 0;
  double frequency = 0.0;
};
std::vector<HistogramBin> histogram(const std::vector<double>& values, double lo, double hi, std::size_t bins);

/// Uniform law and a companion whose quantile coincides with it on
/// [1/3, 2/3] and is shifted by -delta below and +delta above.
std::pair<DistributionModel, DistributionModel> coincident_quantile_pair(double delta = 0.1);

struct NonconsistencySummary {
  std::size_t n = 0;
  std::size_t m = 0;
  std::size_t reps = 0;
  double gamma = 0.0;             // population value on the grid
  double coincidence_measure = 0.0;  // grid measure of {F^-1 = G^-1}
  double mean = 0.0;              // of gamma_hat - gamma
  double sd = 0.0;
  double mc_se = 0.0;             // sd / sqrt(reps)
  bool degenerate = false;        // coincidence set is null: the demo reduces to consistency
  std::vector<double> deviations;
  std::vector<HistogramBin> histogram;
};

/// Monte Carlo law of gamma(Fn, Gm) - gamma(F, G) when the quantiles coincide
/// on a set of positive measure. The estimator uses the exact sample measure.
NonconsistencySummary nonconsistency_demo(const DistributionModel& f, const DistributionModel& g, std::size_t n,
                                          std::size_t m, std::size_t reps, const GridSpec& grid, SeedSpec seed,
                                          unsigned threads = 1);

}  // namespace stochord
