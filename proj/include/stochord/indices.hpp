#pragma once

#include <cstddef>
#include <optional>
#include <vector>

#include "stochord/distributions.hpp"

namespace stochord {

/// Quantile levels on which set measures in (0,1) are approximated.
///
/// `uniform(m)` is the closed grid j/(m-1), j = 0..m-1; the endpoints 0 and 1
/// are excluded from every comparison, so measures are proportions over the
/// m-2 interior points. `rank_aligned(n)` is the midpoint grid (j-1/2)/n,
/// j = 1..n, on which the empirical quantile of an n-sample visits each order
/// statistic exactly once.
struct GridSpec {
  enum class Layout { uniform, rank_aligned };

  std::size_t size = 1001;
  Layout layout = Layout::uniform;

  static GridSpec uniform(std::size_t m);
  static GridSpec rank_aligned(std::size_t n);

  /// Levels used in comparisons, strictly inside (0,1).
  [[nodiscard]] std::vector<double> interior_points() const;
  [[nodiscard]] std::size_t interior_count() const noexcept;
  /// 1-based rank ceil(n t_j) of interior point j, in exact integer arithmetic.
  [[nodiscard]] std::size_t empirical_rank(std::size_t j, std::size_t n) const noexcept;

  friend bool operator==(const GridSpec&, const GridSpec&) = default;
};

inline constexpr std::size_t kDefaultGridSize = 1001;
inline constexpr std::size_t kStudyGridSize = 10001;

/// Quantile function evaluated at every interior point of `grid`.
std::vector<double> quantiles_on_grid(const DistributionModel& model, const GridSpec& grid);

/// Proportion of interior grid levels t with F^-1(t) > G^-1(t).
double gamma_index(const DistributionModel& f, const DistributionModel& g, const GridSpec& grid);
/// Exact Lebesgue measure of {t : Fn^-1(t) > Gm^-1(t)} for two samples.
double gamma_exact(const EmpiricalDistribution& f, const EmpiricalDistribution& g);

/// P(X > Y) for independent X ~ F, Y ~ G.
double rho_index(const DistributionModel& f, const DistributionModel& g);
/// #{(i,j) : x_i > y_j}, by a linear merge of the sorted samples.
unsigned long long count_exceedances(const EmpiricalDistribution& x, const EmpiricalDistribution& y);

/// sup_x (G(x) - F(x)), never negative.
double pi_index(const DistributionModel& f, const DistributionModel& g);
/// A point where the supremum of G - F is (approximately) attained, with the
/// supremum itself. For empirical inputs the point may be a left limit.
struct PiArgmax {
  double x = 0.0;
  double value = 0.0;
};
PiArgmax pi_argmax(const DistributionModel& f, const DistributionModel& g);

/// Integral of (G-F)^+ over the integral of |G-F|; empty when F = G.
std::optional<double> epsilon_index(const DistributionModel& f, const DistributionModel& g);

/// 1 - pi(G, F).
double vartheta_index(const DistributionModel& f, const DistributionModel& g);

/// Rearranged quantile of G that attains the minimal coupling:
/// G^-1(pi0 + t) on (0, 1-pi0) and G^-1(t - (1-pi0)) on [1-pi0, 1).
double rearranged_quantile(const DistributionModel& g, double pi0, double t);

/// Proportion of interior grid levels with F^-1(t) > rearranged G^-1(t).
double coupling_violation_measure(const DistributionModel& f, const DistributionModel& g, double pi0,
                                  const GridSpec& grid);

/// Copula of (F^-1(U), rearranged G^-1(U)); a four-branch piecewise formula in pi0.
double optimal_copula_eval(double pi0, double x, double y);

struct IndexReport {
  double gamma = 0.0;
  double rho = 0.0;
  double pi = 0.0;
  double vartheta = 0.0;
  std::optional<double> epsilon;
  double gamma_reversed = 0.0;
  double rho_reversed = 0.0;
  double pi_reversed = 0.0;
  std::size_t grid_size = 0;
  bool tie_flag = false;

  /// The minimal P(X > Y) over couplings, which equals pi.
  [[nodiscard]] double upsilon() const noexcept { return pi; }
};

/// All indices for the ordered pair (F, G) and the reversed pair.
IndexReport index_report(const DistributionModel& f, const DistributionModel& g, const GridSpec& grid);

}  // namespace stochord
