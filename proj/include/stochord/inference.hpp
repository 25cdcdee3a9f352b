#pragma once

#include <cstddef>
#include <span>
#include <string_view>
#include <vector>

#include "stochord/bridge.hpp"
#include "stochord/distributions.hpp"
#include "stochord/indices.hpp"
#include "stochord/random.hpp"

namespace stochord {

inline constexpr std::size_t kDefaultBootstrap = 1000;
inline constexpr double kDefaultAlpha = 0.05;

struct GaltonResult {
  std::size_t count = 0;  // #{i : x_(i) > y_(i)}
  std::size_t n = 0;
  double p_value = 1.0;   // P(Count <= count) = (count + 1)/(n + 1) when F = G
  bool tie_flag = false;  // some x_(i) == y_(i); ties count as non-exceedances
};

/// Rank-order statistic for two samples of equal size. Throws DomainError for
/// unequal or empty samples.
GaltonResult galton_test(std::span<const double> xs, std::span<const double> ys);

/// gamma(Fn, Gm) on `grid`.
double gamma_plugin(std::span<const double> xs, std::span<const double> ys, const GridSpec& grid);

enum class IndexKind { gamma, pi, rho };
IndexKind parse_index_kind(std::string_view name);
std::string_view to_string(IndexKind kind);

/// Standard deviation (n-1 normalisation) of B bootstrap replicates of the
/// plug-in index. Each sample is resampled with replacement at its own size;
/// replicate b draws from seed.substream(b). Throws DomainError for B < 2.
double bootstrap_sd(std::span<const double> xs, std::span<const double> ys, IndexKind kind, std::size_t B,
                    const GridSpec& grid, SeedSpec seed, unsigned threads = 1);

/// The replicates themselves, in replicate order.
std::vector<double> bootstrap_replicates(std::span<const double> xs, std::span<const double> ys, IndexKind kind,
                                         std::size_t B, const GridSpec& grid, SeedSpec seed, unsigned threads = 1);

struct TestResult {
  double estimate = 0.0;
  double bootstrap_sd = 0.0;
  // bound_u = estimate - sd * z_alpha, bound_v = estimate + sd * z_alpha with
  // z_alpha = Phi^-1(alpha). For alpha < 1/2, U is the upper value.
  double bound_u = 0.0;
  double bound_v = 0.0;
  double alpha = kDefaultAlpha;
  double gamma0 = 0.0;
  bool reject = false;      // H0: gamma >= gamma0 rejected iff bound_u < gamma0
  bool degenerate = false;  // bootstrap sd was 0; bounds collapse to the estimate
  std::size_t B = 0;
  std::size_t n = 0;
  std::size_t m = 0;
  GridSpec grid;
  SeedSpec seed;
};

/// Bootstrap-normal test of H0: gamma(F,G) >= gamma0 against gamma < gamma0.
TestResult gamma_threshold_test(std::span<const double> xs, std::span<const double> ys, double gamma0, double alpha,
                                std::size_t B, const GridSpec& grid, SeedSpec seed, unsigned threads = 1);

/// Points where F^-1 - G^-1 changes sign.
struct CrossingSpec {
  struct Point {
    double t = 0.5;
    double x = 0.0;
    double f = 0.0;  // density of F at x
    double g = 0.0;  // density of G at x
  };
  std::vector<Point> points;
  double lambda = 0.5;  // limit of n/(n+m)

  /// Throws DomainError unless lambda in (0,1) and t strictly increasing in
  /// (0,1); AssumptionError when f == g at a crossing.
  void validate() const;
};

/// Locates the sign changes of F^-1 - G^-1 on `grid` and refines each by
/// bisection. Throws AssumptionError when the densities agree within 1e-3
/// (relative) at a crossing or the quantiles coincide on an interval.
CrossingSpec find_crossings(const DistributionModel& f, const DistributionModel& g, double lambda,
                            const GridSpec& grid = GridSpec::uniform(kStudyGridSize));

/// gamma(F, G) computed from the crossing levels: the total length of the
/// intervals between consecutive crossings on which F^-1 > G^-1.
double gamma_from_crossings(const DistributionModel& f, const DistributionModel& g, const CrossingSpec& cross);

/// Variance of the normal limit of sqrt(nm/(n+m)) (gamma_hat - gamma).
double gamma_limit_variance(const CrossingSpec& cross);

/// Default band for the discretized sup set: 1e-3 * pi, floored at 1e-12.
double default_gamma_set_tolerance(double pi);

/// Draws of sup over Gamma(F,G) of sqrt(lambda) B1(G(x)) - sqrt(1-lambda) B2(F(x)),
/// the limit law of sqrt(nm/(n+m)) (pi_hat - pi). Gamma is discretized as the
/// points of a quantile grid where G - F >= max - tolerance. Path i uses
/// seed.substream(i).
std::vector<double> pi_limit_sample(const DistributionModel& f, const DistributionModel& g, double lambda,
                                    double gamma_set_tolerance, const GridSpec& grid, std::size_t n_paths,
                                    SeedSpec seed, std::size_t bridge_grid = kDefaultBridgeGrid,
                                    unsigned threads = 1);

}  // namespace stochord
