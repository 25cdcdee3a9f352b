#include "stochord/distributions.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <sstream>

#include "stochord/errors.hpp"
#include "stochord/numeric.hpp"

namespace stochord {

// ---------------------------------------------------------------------------
// EmpiricalDistribution

EmpiricalDistribution::EmpiricalDistribution(std::vector<double> values) : values_(std::move(values)) {
  if (values_.empty()) throw DomainError("empirical distribution needs at least one value");
  for (double v : values_)
    if (!std::isfinite(v)) throw DomainError("empirical distribution values must be finite");
  if (!std::is_sorted(values_.begin(), values_.end())) std::sort(values_.begin(), values_.end());
  has_ties_ = std::adjacent_find(values_.begin(), values_.end()) != values_.end();
}

double EmpiricalDistribution::cdf(double x) const noexcept {
  const auto it = std::upper_bound(values_.begin(), values_.end(), x);
  return static_cast<double>(it - values_.begin()) / static_cast<double>(values_.size());
}

double EmpiricalDistribution::cdf_left(double x) const noexcept {
  const auto it = std::lower_bound(values_.begin(), values_.end(), x);
  return static_cast<double>(it - values_.begin()) / static_cast<double>(values_.size());
}

double EmpiricalDistribution::quantile(double t) const {
  if (!(t > 0.0 && t <= 1.0)) throw DomainError("empirical quantile: t must lie in (0,1]");
  const auto n = values_.size();
  auto rank = static_cast<std::size_t>(std::ceil(static_cast<double>(n) * t));
  rank = std::clamp<std::size_t>(rank, 1, n);
  return values_[rank - 1];
}

EmpiricalDistribution empirical_from_sample(std::vector<double> values) {
  return EmpiricalDistribution(std::move(values));
}

// ---------------------------------------------------------------------------
// Noncentral t with one degree of freedom

namespace detail {

namespace {
// |W| has density 2 phi(w) on (0, inf); mass beyond w = 10 is below 1e-22.
constexpr double kHalfNormalCutoff = 10.0;
constexpr double kT1QuadratureTol = 1e-12;
}  // namespace

// The integrands switch over near w = ncp / x on a scale 1/|x|; breaking the
// range around that point keeps every panel smooth.
template <class F>
double integrate_half_normal(F&& f, double x, double ncp) {
  std::vector<double> breaks{0.0, kHalfNormalCutoff};
  if (x != 0.0) {
    const double centre = std::max(0.0, ncp / x);
    const double scale = 1.0 / std::abs(x);
    for (double k : {-8.0, -2.0, 0.0, 2.0, 8.0}) {
      const double b = centre + k * scale;
      if (b > 0.0 && b < kHalfNormalCutoff) breaks.push_back(b);
    }
  }
  std::sort(breaks.begin(), breaks.end());
  const double share = kT1QuadratureTol / static_cast<double>(breaks.size() - 1);
  double total = 0.0;
  for (std::size_t i = 0; i + 1 < breaks.size(); ++i)
    total += adaptive_gauss_kronrod(f, breaks[i], breaks[i + 1], share);
  return total;
}

double t1_cdf(double x, double ncp) {
  if (x == std::numeric_limits<double>::infinity()) return 1.0;
  if (x == -std::numeric_limits<double>::infinity()) return 0.0;
  const auto integrand = [&](double w) { return 2.0 * normal_pdf(w) * normal_cdf(x * w - ncp); };
  return std::clamp(integrate_half_normal(integrand, x, ncp), 0.0, 1.0);
}

double t1_density(double x, double ncp) {
  const auto integrand = [&](double w) { return 2.0 * w * normal_pdf(w) * normal_pdf(x * w - ncp); };
  return std::max(0.0, integrate_half_normal(integrand, x, ncp));
}

}  // namespace detail

namespace {

constexpr double kQuantileTol = 1e-10;

// Illinois-modified regula falsi on a bracket with f(lo) < 0 <= f(hi). The
// bracket is kept throughout, so the returned upper end always satisfies
// f >= 0 and lies within `tol` of the sign change.
template <class F>
double bracketed_root(F&& f, double lo, double hi, double flo, double fhi, double tol) {
  int side = 0;
  for (int iter = 0; iter < 300; ++iter) {
    const double width = hi - lo;
    if (width <= tol || width <= 4.0 * std::numeric_limits<double>::epsilon() * std::abs(hi)) break;
    double x = lo - flo * width / (fhi - flo);
    if (!(x > lo && x < hi)) x = 0.5 * (lo + hi);
    const double fx = f(x);
    if (fx < 0.0) {
      lo = x;
      flo = fx;
      if (side == -1) fhi *= 0.5;
      side = -1;
    } else {
      hi = x;
      fhi = fx;
      if (side == 1) flo *= 0.5;
      side = 1;
    }
  }
  return hi;
}

// Generalized inverse of a continuous, nondecreasing CDF by bracketing.
template <class Cdf>
double invert_cdf(Cdf&& cdf, double t, double lo, double hi) {
  double flo = cdf(lo) - t;
  double width = std::max(1.0, hi - lo);
  while (flo >= 0.0) {
    hi = lo;
    lo -= width;
    width *= 2.0;
    flo = cdf(lo) - t;
    if (!std::isfinite(lo)) throw DomainError("quantile bracket diverged");
  }
  double fhi = cdf(hi) - t;
  width = std::max(1.0, hi - lo);
  while (fhi < 0.0) {
    lo = hi;
    flo = fhi;
    hi += width;
    width *= 2.0;
    fhi = cdf(hi) - t;
    if (!std::isfinite(hi)) throw DomainError("quantile bracket diverged");
  }
  return bracketed_root([&](double x) { return cdf(x) - t; }, lo, hi, flo, fhi, kQuantileTol);
}

}  // namespace

// ---------------------------------------------------------------------------
// DistributionModel

namespace {

template <class... Ts>
struct overloaded : Ts... {
  using Ts::operator()...;
};

void validate_sd(double sd) {
  if (!(sd > 0.0) || !std::isfinite(sd)) throw ParameterError("standard deviation must be positive and finite");
}

double mixture_cdf(const NormalMixtureLaw& law, double x) {
  double c = 0.0;
  for (const auto& comp : law.components) c += comp.weight * normal_cdf((x - comp.mean) / comp.sd);
  return std::clamp(c, 0.0, 1.0);
}

double pwlq_cdf(const PiecewiseLinearQuantileLaw& law, double x) {
  double c = 0.0;
  for (const auto& seg : law.segments) {
    if (x >= seg.x_hi) {
      c = seg.t_hi;
    } else {
      if (x > seg.x_lo) c = seg.t_lo + (seg.t_hi - seg.t_lo) * (x - seg.x_lo) / (seg.x_hi - seg.x_lo);
      break;
    }
  }
  return c;
}

double pwlq_quantile(const PiecewiseLinearQuantileLaw& law, double t) {
  for (const auto& seg : law.segments)
    if (t <= seg.t_hi) return seg.x_lo + (seg.x_hi - seg.x_lo) * (t - seg.t_lo) / (seg.t_hi - seg.t_lo);
  return law.segments.back().x_hi;
}

}  // namespace

DistributionModel DistributionModel::normal(double mean, double sd) {
  if (!std::isfinite(mean)) throw ParameterError("normal mean must be finite");
  validate_sd(sd);
  return DistributionModel(NormalLaw{mean, sd});
}

DistributionModel DistributionModel::noncentral_t1(double ncp) {
  if (!std::isfinite(ncp)) throw ParameterError("noncentrality parameter must be finite");
  return DistributionModel(NoncentralT1Law{ncp});
}

DistributionModel DistributionModel::mixture(std::vector<MixtureComponent> components) {
  if (components.empty()) throw ParameterError("mixture needs at least one component");
  double total = 0.0;
  for (const auto& comp : components) {
    if (!(comp.weight > 0.0 && comp.weight <= 1.0)) throw ParameterError("mixture weights must lie in (0,1]");
    if (!std::isfinite(comp.mean)) throw ParameterError("mixture component mean must be finite");
    validate_sd(comp.sd);
    total += comp.weight;
  }
  if (std::abs(total - 1.0) > 1e-12) throw ParameterError("mixture weights must sum to 1");
  return DistributionModel(NormalMixtureLaw{std::move(components)});
}

DistributionModel DistributionModel::piecewise_linear_quantile(std::vector<QuantileSegment> segments) {
  if (segments.empty()) throw ParameterError("quantile needs at least one segment");
  double t_prev = 0.0;
  double x_prev = -std::numeric_limits<double>::infinity();
  for (const auto& seg : segments) {
    if (seg.t_lo != t_prev || !(seg.t_hi > seg.t_lo))
      throw ParameterError("quantile segments must tile (0,1) in increasing order");
    if (!(seg.x_hi > seg.x_lo) || !(seg.x_lo >= x_prev) || !std::isfinite(seg.x_lo) || !std::isfinite(seg.x_hi))
      throw ParameterError("quantile segments must be strictly increasing and ordered");
    t_prev = seg.t_hi;
    x_prev = seg.x_hi;
  }
  if (t_prev != 1.0) throw ParameterError("quantile segments must end at t = 1");
  return DistributionModel(PiecewiseLinearQuantileLaw{std::move(segments)});
}

DistributionModel DistributionModel::uniform(double lo, double hi) {
  return piecewise_linear_quantile({QuantileSegment{0.0, 1.0, lo, hi}});
}

DistributionModel DistributionModel::empirical(EmpiricalDistribution dist) {
  return DistributionModel(std::make_shared<const EmpiricalDistribution>(std::move(dist)));
}

DistributionModel DistributionModel::empirical(std::vector<double> values) {
  return empirical(EmpiricalDistribution(std::move(values)));
}

DistributionModel::Kind DistributionModel::kind() const noexcept {
  return static_cast<Kind>(law_.index());
}

const EmpiricalDistribution& DistributionModel::as_empirical() const {
  return *std::get<std::shared_ptr<const EmpiricalDistribution>>(law_);
}

double DistributionModel::cdf(double x) const {
  if (std::isnan(x)) throw DomainError("cdf of NaN");
  return std::visit(overloaded{
                        [&](const NormalLaw& l) { return normal_cdf((x - l.mean) / l.sd); },
                        [&](const NoncentralT1Law& l) { return detail::t1_cdf(x, l.ncp); },
                        [&](const NormalMixtureLaw& l) { return mixture_cdf(l, x); },
                        [&](const PiecewiseLinearQuantileLaw& l) { return pwlq_cdf(l, x); },
                        [&](const std::shared_ptr<const EmpiricalDistribution>& e) { return e->cdf(x); },
                    },
                    law_);
}

double DistributionModel::cdf_left(double x) const {
  if (is_empirical()) return as_empirical().cdf_left(x);
  return cdf(x);
}

double DistributionModel::density(double x) const {
  return std::visit(overloaded{
                        [&](const NormalLaw& l) { return normal_pdf((x - l.mean) / l.sd) / l.sd; },
                        [&](const NoncentralT1Law& l) { return detail::t1_density(x, l.ncp); },
                        [&](const NormalMixtureLaw& l) {
                          double d = 0.0;
                          for (const auto& c : l.components) d += c.weight * normal_pdf((x - c.mean) / c.sd) / c.sd;
                          return d;
                        },
                        [&](const PiecewiseLinearQuantileLaw& l) {
                          for (const auto& s : l.segments)
                            if (x >= s.x_lo && x < s.x_hi) return (s.t_hi - s.t_lo) / (s.x_hi - s.x_lo);
                          return 0.0;
                        },
                        [&](const std::shared_ptr<const EmpiricalDistribution>&) -> double {
                          throw DomainError("empirical distributions have no density");
                        },
                    },
                    law_);
}

double DistributionModel::quantile(double t) const {
  if (!(t > 0.0 && t < 1.0)) throw DomainError("quantile level must lie in (0,1)");
  return std::visit(overloaded{
                        [&](const NormalLaw& l) { return l.mean + l.sd * normal_quantile(t); },
                        [&](const NoncentralT1Law& l) {
                          // tan(pi (t - 1/2)) is the central quantile; shift by ncp for a start.
                          const double guess = std::tan(3.141592653589793 * (t - 0.5)) + l.ncp;
                          const double span = std::max(1.0, 0.5 * std::abs(guess));
                          return invert_cdf([&](double x) { return detail::t1_cdf(x, l.ncp); }, t, guess - span,
                                            guess + span);
                        },
                        [&](const NormalMixtureLaw& l) {
                          double lo = std::numeric_limits<double>::infinity();
                          double hi = -lo;
                          double max_sd = 0.0;
                          for (const auto& c : l.components) {
                            lo = std::min(lo, c.mean);
                            hi = std::max(hi, c.mean);
                            max_sd = std::max(max_sd, c.sd);
                          }
                          return invert_cdf([&](double x) { return mixture_cdf(l, x); }, t, lo - 12.0 * max_sd,
                                            hi + 12.0 * max_sd);
                        },
                        [&](const PiecewiseLinearQuantileLaw& l) { return pwlq_quantile(l, t); },
                        [&](const std::shared_ptr<const EmpiricalDistribution>& e) { return e->quantile(t); },
                    },
                    law_);
}

void DistributionModel::sample_into(std::span<double> out, RandomStream& rng) const {
  std::visit(overloaded{
                 [&](const NormalLaw& l) {
                   for (double& v : out) v = l.mean + l.sd * rng.normal();
                 },
                 [&](const NoncentralT1Law& l) {
                   for (double& v : out) {
                     const double z = rng.normal();
                     const double w = rng.normal();
                     v = (z + l.ncp) / std::abs(w);
                   }
                 },
                 [&](const NormalMixtureLaw& l) {
                   for (double& v : out) {
                     const double u = rng.uniform();
                     double acc = 0.0;
                     const MixtureComponent* pick = &l.components.back();
                     for (const auto& c : l.components) {
                       acc += c.weight;
                       if (u < acc) {
                         pick = &c;
                         break;
                       }
                     }
                     v = pick->mean + pick->sd * rng.normal();
                   }
                 },
                 [&](const PiecewiseLinearQuantileLaw& l) {
                   for (double& v : out) v = pwlq_quantile(l, rng.uniform());
                 },
                 [&](const std::shared_ptr<const EmpiricalDistribution>& e) {
                   const auto values = e->values();
                   for (double& v : out) v = values[rng.below(values.size())];
                 },
             },
             law_);
}

std::vector<double> DistributionModel::sample(std::size_t n, SeedSpec seed) const {
  if (n == 0) throw DomainError("sample size must be at least 1");
  std::vector<double> out(n);
  RandomStream rng(seed);
  sample_into(out, rng);
  return out;
}

std::pair<double, double> DistributionModel::effective_support(double tail) const {
  if (is_empirical()) {
    const auto v = as_empirical().values();
    return {v.front(), v.back()};
  }
  if (const auto* p = std::get_if<PiecewiseLinearQuantileLaw>(&law_))
    return {p->segments.front().x_lo, p->segments.back().x_hi};
  return {quantile(tail), quantile(1.0 - tail)};
}

std::string DistributionModel::describe() const {
  std::ostringstream os;
  os.precision(17);
  std::visit(overloaded{
                 [&](const NormalLaw& l) { os << "N(" << l.mean << ", " << l.sd << "^2)"; },
                 [&](const NoncentralT1Law& l) { os << "t1(ncp=" << l.ncp << ")"; },
                 [&](const NormalMixtureLaw& l) {
                   for (std::size_t i = 0; i < l.components.size(); ++i) {
                     const auto& c = l.components[i];
                     os << (i ? " + " : "") << c.weight << "*N(" << c.mean << ", " << c.sd << "^2)";
                   }
                 },
                 [&](const PiecewiseLinearQuantileLaw& l) { os << "pwlq(" << l.segments.size() << " segments)"; },
                 [&](const std::shared_ptr<const EmpiricalDistribution>& e) { os << "empirical(n=" << e->size() << ")"; },
             },
             law_);
  return os.str();
}

}  // namespace stochord
