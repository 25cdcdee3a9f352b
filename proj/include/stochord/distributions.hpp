#pragma once

#include <cstddef>
#include <memory>
#include <span>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "stochord/random.hpp"

namespace stochord {

/// A sorted sample with its step-function CDF and left-continuous quantile.
class EmpiricalDistribution {
 public:
  /// Sorts a copy of `values`. Throws DomainError when empty or non-finite.
  explicit EmpiricalDistribution(std::vector<double> values);

  [[nodiscard]] std::span<const double> values() const noexcept { return values_; }
  [[nodiscard]] std::size_t size() const noexcept { return values_.size(); }
  /// True when the sample contains repeated values.
  [[nodiscard]] bool has_ties() const noexcept { return has_ties_; }

  /// #{values <= x} / n
  [[nodiscard]] double cdf(double x) const noexcept;
  /// #{values < x} / n, the left limit of the CDF at x.
  [[nodiscard]] double cdf_left(double x) const noexcept;
  /// The ceil(n t)-th order statistic. Throws DomainError unless 0 < t <= 1.
  [[nodiscard]] double quantile(double t) const;
  /// Order statistic by 1-based rank.
  [[nodiscard]] double order_statistic(std::size_t rank) const { return values_.at(rank - 1); }

 private:
  std::vector<double> values_;
  bool has_ties_ = false;
};

/// Builds an EmpiricalDistribution; the tie flag is set for repeated values.
EmpiricalDistribution empirical_from_sample(std::vector<double> values);

struct NormalLaw {
  double mean = 0.0;
  double sd = 1.0;
};

/// Noncentral t with one degree of freedom: (Z + ncp) / |W| for independent
/// standard normals Z, W.
struct NoncentralT1Law {
  double ncp = 0.0;
};

struct MixtureComponent {
  double weight = 1.0;
  double mean = 0.0;
  double sd = 1.0;
};

struct NormalMixtureLaw {
  std::vector<MixtureComponent> components;
};

/// Linear pieces of a quantile function on consecutive probability intervals.
/// Jumps between pieces are allowed (gaps in the support); each piece must be
/// strictly increasing so the CDF stays continuous.
struct QuantileSegment {
  double t_lo = 0.0;
  double t_hi = 1.0;
  double x_lo = 0.0;
  double x_hi = 1.0;
};

struct PiecewiseLinearQuantileLaw {
  std::vector<QuantileSegment> segments;
};

/// An analytic or empirical univariate law. Immutable after construction and
/// safe to share across threads.
class DistributionModel {
 public:
  enum class Kind { normal, noncentral_t1, normal_mixture, piecewise_linear_quantile, empirical };

  static DistributionModel normal(double mean, double sd);
  static DistributionModel noncentral_t1(double ncp);
  static DistributionModel mixture(std::vector<MixtureComponent> components);
  static DistributionModel piecewise_linear_quantile(std::vector<QuantileSegment> segments);
  static DistributionModel uniform(double lo = 0.0, double hi = 1.0);
  static DistributionModel empirical(EmpiricalDistribution dist);
  static DistributionModel empirical(std::vector<double> values);

  [[nodiscard]] Kind kind() const noexcept;
  [[nodiscard]] bool is_empirical() const noexcept { return kind() == Kind::empirical; }
  /// Empirical payload; throws std::bad_variant_access for analytic models.
  [[nodiscard]] const EmpiricalDistribution& as_empirical() const;

  [[nodiscard]] double cdf(double x) const;
  /// P(X < x); equals cdf(x) for models with a continuous CDF.
  [[nodiscard]] double cdf_left(double x) const;
  /// Density; throws DomainError for empirical models.
  [[nodiscard]] double density(double x) const;
  /// inf{x : t <= F(x)}. Throws DomainError unless t in (0,1).
  [[nodiscard]] double quantile(double t) const;
  /// n i.i.d. draws, a pure function of (model, n, seed). Throws DomainError for n == 0.
  [[nodiscard]] std::vector<double> sample(std::size_t n, SeedSpec seed) const;
  /// Draws into `out` from an already-positioned stream.
  void sample_into(std::span<double> out, RandomStream& rng) const;

  /// An interval carrying all but `tail` probability on each side.
  [[nodiscard]] std::pair<double, double> effective_support(double tail) const;

  [[nodiscard]] std::string describe() const;

  [[nodiscard]] const auto& law() const noexcept { return law_; }

 private:
  using Law = std::variant<NormalLaw, NoncentralT1Law, NormalMixtureLaw, PiecewiseLinearQuantileLaw,
                           std::shared_ptr<const EmpiricalDistribution>>;
  explicit DistributionModel(Law law) : law_(std::move(law)) {}

  Law law_;
};

namespace detail {
double t1_cdf(double x, double ncp);
double t1_density(double x, double ncp);
}  // namespace detail

}  // namespace stochord
