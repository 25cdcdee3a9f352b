#include "stochord/indices.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "stochord/errors.hpp"
#include "stochord/numeric.hpp"

namespace stochord {

// ---------------------------------------------------------------------------
// GridSpec

GridSpec GridSpec::uniform(std::size_t m) {
  if (m < 3) throw DomainError("uniform grid needs at least 3 points");
  return GridSpec{m, Layout::uniform};
}

GridSpec GridSpec::rank_aligned(std::size_t n) {
  if (n < 1) throw DomainError("rank-aligned grid needs at least 1 point");
  return GridSpec{n, Layout::rank_aligned};
}

std::size_t GridSpec::interior_count() const noexcept {
  return layout == Layout::uniform ? size - 2 : size;
}

std::vector<double> GridSpec::interior_points() const {
  if (layout == Layout::uniform && size < 3) throw DomainError("uniform grid needs at least 3 points");
  std::vector<double> t(interior_count());
  for (std::size_t j = 0; j < t.size(); ++j) {
    const auto k = static_cast<double>(j + 1);
    t[j] = layout == Layout::uniform ? k / static_cast<double>(size - 1)
                                     : (2.0 * k - 1.0) / (2.0 * static_cast<double>(size));
  }
  return t;
}

std::size_t GridSpec::empirical_rank(std::size_t j, std::size_t n) const noexcept {
  const std::size_t k = j + 1;
  if (layout == Layout::uniform) return (n * k + size - 2) / (size - 1);
  return (n * (2 * k - 1) + 2 * size - 1) / (2 * size);
}

std::vector<double> quantiles_on_grid(const DistributionModel& model, const GridSpec& grid) {
  if (model.is_empirical()) {
    const auto values = model.as_empirical().values();
    std::vector<double> q(grid.interior_count());
    for (std::size_t j = 0; j < q.size(); ++j) q[j] = values[grid.empirical_rank(j, values.size()) - 1];
    return q;
  }
  const auto t = grid.interior_points();
  std::vector<double> q(t.size());
  for (std::size_t j = 0; j < t.size(); ++j) q[j] = model.quantile(t[j]);
  return q;
}

// ---------------------------------------------------------------------------
// gamma

double gamma_index(const DistributionModel& f, const DistributionModel& g, const GridSpec& grid) {
  const auto qf = quantiles_on_grid(f, grid);
  const auto qg = quantiles_on_grid(g, grid);
  std::size_t count = 0;
  for (std::size_t j = 0; j < qf.size(); ++j) count += qf[j] > qg[j];
  return static_cast<double>(count) / static_cast<double>(qf.size());
}

double gamma_exact(const EmpiricalDistribution& f, const EmpiricalDistribution& g) {
  // Work in units of 1/(nm): Fn^-1 is x_(i) on ((i-1)m, im], Gm^-1 is y_(j) on ((j-1)n, jn].
  const auto x = f.values();
  const auto y = g.values();
  const std::uint64_t n = x.size();
  const std::uint64_t m = y.size();
  std::uint64_t i = 1;
  std::uint64_t j = 1;
  std::uint64_t pos = 0;
  std::uint64_t measure = 0;
  while (i <= n && j <= m) {
    const std::uint64_t end_x = i * m;
    const std::uint64_t end_y = j * n;
    const std::uint64_t end = std::min(end_x, end_y);
    if (x[i - 1] > y[j - 1]) measure += end - pos;
    pos = end;
    if (end_x == end) ++i;
    if (end_y == end) ++j;
  }
  return static_cast<double>(measure) / (static_cast<double>(n) * static_cast<double>(m));
}

// ---------------------------------------------------------------------------
// rho

unsigned long long count_exceedances(const EmpiricalDistribution& x, const EmpiricalDistribution& y) {
  const auto xs = x.values();
  const auto ys = y.values();
  unsigned long long count = 0;
  std::size_t below = 0;  // #{y < current x}
  for (double v : xs) {
    while (below < ys.size() && ys[below] < v) ++below;
    count += below;
  }
  return count;
}

double rho_index(const DistributionModel& f, const DistributionModel& g) {
  if (f.is_empirical() && g.is_empirical()) {
    const auto& x = f.as_empirical();
    const auto& y = g.as_empirical();
    return static_cast<double>(count_exceedances(x, y)) /
           (static_cast<double>(x.size()) * static_cast<double>(y.size()));
  }
  if (f.is_empirical()) {
    double sum = 0.0;
    for (double v : f.as_empirical().values()) sum += g.cdf_left(v);
    return sum / static_cast<double>(f.as_empirical().size());
  }
  if (g.is_empirical()) {
    // F is continuous here, so P(X > y) = 1 - F(y).
    double sum = 0.0;
    for (double v : g.as_empirical().values()) sum += 1.0 - f.cdf(v);
    return sum / static_cast<double>(g.as_empirical().size());
  }
  const auto integrand = [&](double t) {
    if (t <= 0.0) return 0.0;
    if (t >= 1.0) return 1.0;
    return g.cdf_left(f.quantile(t));
  };
  return std::clamp(adaptive_simpson(integrand, 0.0, 1.0, 1e-9), 0.0, 1.0);
}

// ---------------------------------------------------------------------------
// pi

namespace {

// Exact sup over pooled jump points of two step functions, in integer units.
PiArgmax pi_two_samples(const EmpiricalDistribution& f, const EmpiricalDistribution& g) {
  const auto x = f.values();
  const auto y = g.values();
  const auto n = static_cast<long long>(x.size());
  const auto m = static_cast<long long>(y.size());
  long long best = 0;  // numerator over n*m of G - F
  double where = std::min(x.front(), y.front());
  std::size_t i = 0;
  std::size_t j = 0;
  while (i < x.size() || j < y.size()) {
    const double v = j == y.size() || (i < x.size() && x[i] < y[j]) ? x[i] : y[j];
    // Left limit at v equals the value just after the previous pooled point,
    // which the previous iteration already examined.
    while (i < x.size() && x[i] == v) ++i;
    while (j < y.size() && y[j] == v) ++j;
    const long long diff = static_cast<long long>(j) * n - static_cast<long long>(i) * m;
    if (diff > best) {
      best = diff;
      where = v;
    }
  }
  return {where, static_cast<double>(best) / (static_cast<double>(n) * static_cast<double>(m))};
}

// One argument empirical, the other with a continuous CDF: the supremum of
// G - F sits at a jump, as a value or a left limit.
PiArgmax pi_mixed(const DistributionModel& f, const DistributionModel& g) {
  const auto& emp = f.is_empirical() ? f.as_empirical() : g.as_empirical();
  PiArgmax best{emp.values().front(), 0.0};
  for (double v : emp.values()) {
    const double right = g.cdf(v) - f.cdf(v);
    const double left = g.cdf_left(v) - f.cdf_left(v);
    const double d = std::max(left, right);
    if (d > best.value) best = {v, d};
  }
  return best;
}

PiArgmax pi_analytic(const DistributionModel& f, const DistributionModel& g) {
  constexpr int kLevels = 1000;
  std::vector<double> xs;
  xs.reserve(2 * kLevels);
  for (int k = 0; k < kLevels; ++k) {
    const double t = (k + 0.5) / kLevels;
    xs.push_back(f.quantile(t));
    xs.push_back(g.quantile(t));
  }
  // the supremum may sit far out in a tail (unequal scales)
  for (int k = 0; k <= 220; ++k) {
    const double t = std::pow(10.0, -15.0 + k / 20.0);
    if (t >= 0.5 / kLevels) break;
    for (const auto* m : {&f, &g}) {
      xs.push_back(m->quantile(t));
      xs.push_back(m->quantile(1.0 - t));
    }
  }
  std::sort(xs.begin(), xs.end());
  xs.erase(std::unique(xs.begin(), xs.end()), xs.end());

  std::vector<double> d(xs.size());
  for (std::size_t i = 0; i < xs.size(); ++i) d[i] = g.cdf(xs[i]) - f.cdf(xs[i]);

  // Refine every grid local maximum that is within reach of the best one.
  const double grid_best = *std::max_element(d.begin(), d.end());
  PiArgmax best{xs[0], std::max(0.0, d[0])};
  const auto diff = [&](double x) { return g.cdf(x) - f.cdf(x); };
  for (std::size_t i = 0; i < xs.size(); ++i) {
    const bool left_ok = i == 0 || d[i] >= d[i - 1];
    const bool right_ok = i + 1 == xs.size() || d[i] >= d[i + 1];
    if (!(left_ok && right_ok) || d[i] < grid_best - 1e-3) continue;
    double a = i == 0 ? xs[i] : xs[i - 1];
    double b = i + 1 == xs.size() ? xs[i] : xs[i + 1];
    // Golden-section search; D is unimodal on the bracket after grid refinement.
    constexpr double kInvPhi = 0.6180339887498949;
    double c = b - kInvPhi * (b - a);
    double e = a + kInvPhi * (b - a);
    double dc = diff(c);
    double de = diff(e);
    for (int it = 0; it < 200 && (b - a) > 1e-12 * std::max(1.0, std::abs(a)); ++it) {
      if (dc >= de) {
        b = e;
        e = c;
        de = dc;
        c = b - kInvPhi * (b - a);
        dc = diff(c);
      } else {
        a = c;
        c = e;
        dc = de;
        e = a + kInvPhi * (b - a);
        de = diff(e);
      }
    }
    const double xm = dc >= de ? c : e;
    const double vm = std::max({dc, de, d[i]});
    if (vm > best.value) best = {vm == d[i] ? xs[i] : xm, vm};
  }
  best.value = std::clamp(best.value, 0.0, 1.0);
  return best;
}

}  // namespace

PiArgmax pi_argmax(const DistributionModel& f, const DistributionModel& g) {
  if (f.is_empirical() && g.is_empirical()) return pi_two_samples(f.as_empirical(), g.as_empirical());
  if (f.is_empirical() || g.is_empirical()) return pi_mixed(f, g);
  return pi_analytic(f, g);
}

double pi_index(const DistributionModel& f, const DistributionModel& g) { return pi_argmax(f, g).value; }

double vartheta_index(const DistributionModel& f, const DistributionModel& g) { return 1.0 - pi_index(g, f); }

// ---------------------------------------------------------------------------
// epsilon

namespace {

constexpr double kEpsilonTail = 1e-10;

struct SignedAreas {
  double positive = 0.0;
  double total = 0.0;
};

SignedAreas areas_two_samples(const EmpiricalDistribution& f, const EmpiricalDistribution& g) {
  const auto x = f.values();
  const auto y = g.values();
  const auto n = static_cast<double>(x.size());
  const auto m = static_cast<double>(y.size());
  std::vector<double> pooled(x.begin(), x.end());
  pooled.insert(pooled.end(), y.begin(), y.end());
  std::sort(pooled.begin(), pooled.end());
  pooled.erase(std::unique(pooled.begin(), pooled.end()), pooled.end());
  SignedAreas out;
  std::size_t i = 0;
  std::size_t j = 0;
  for (std::size_t k = 0; k + 1 < pooled.size(); ++k) {
    while (i < x.size() && x[i] <= pooled[k]) ++i;
    while (j < y.size() && y[j] <= pooled[k]) ++j;
    const double d = static_cast<double>(j) / m - static_cast<double>(i) / n;
    const double width = pooled[k + 1] - pooled[k];
    if (d > 0) out.positive += d * width;
    out.total += std::abs(d) * width;
  }
  return out;
}

SignedAreas areas_numeric(const DistributionModel& f, const DistributionModel& g) {
  std::vector<double> breaks;
  for (const auto* model : {&f, &g}) {
    if (model->is_empirical()) {
      const auto v = model->as_empirical().values();
      breaks.insert(breaks.end(), v.begin(), v.end());
    } else {
      // Quantile-spaced breaks follow the tails of each law.
      for (double t : {kEpsilonTail, 1e-8, 1e-6, 1e-4, 1e-3}) {
        breaks.push_back(model->quantile(t));
        breaks.push_back(model->quantile(1.0 - t));
      }
      for (int k = 1; k < 64; ++k) breaks.push_back(model->quantile(k / 64.0));
    }
  }
  std::sort(breaks.begin(), breaks.end());
  breaks.erase(std::unique(breaks.begin(), breaks.end()), breaks.end());
  const double span = breaks.back() - breaks.front();
  const double tol = 1e-10 * std::max(span, 1.0) / static_cast<double>(breaks.size());
  SignedAreas out;
  for (std::size_t k = 0; k + 1 < breaks.size(); ++k) {
    // Inside a panel the empirical CDFs are constant, so right-continuous values are exact.
    out.positive += adaptive_gauss_kronrod(
        [&](double x) { return std::max(0.0, g.cdf(x) - f.cdf(x)); }, breaks[k], breaks[k + 1], tol, 30);
    out.total += adaptive_gauss_kronrod([&](double x) { return std::abs(g.cdf(x) - f.cdf(x)); }, breaks[k],
                                        breaks[k + 1], tol, 30);
  }
  return out;
}

}  // namespace

std::optional<double> epsilon_index(const DistributionModel& f, const DistributionModel& g) {
  const SignedAreas a = f.is_empirical() && g.is_empirical() ? areas_two_samples(f.as_empirical(), g.as_empirical())
                                                             : areas_numeric(f, g);
  if (!(a.total > 1e-300)) return std::nullopt;
  // Quadrature noise on an (almost) zero denominator is not a meaningful ratio.
  if (!(f.is_empirical() && g.is_empirical()) && a.total < 1e-12) return std::nullopt;
  return std::clamp(a.positive / a.total, 0.0, 1.0);
}

// ---------------------------------------------------------------------------
// Minimal coupling

double rearranged_quantile(const DistributionModel& g, double pi0, double t) {
  if (!(pi0 >= 0.0 && pi0 < 1.0)) throw DomainError("rearranged quantile: pi0 must lie in [0,1)");
  if (!(t > 0.0 && t < 1.0)) throw DomainError("rearranged quantile: t must lie in (0,1)");
  const double split = 1.0 - pi0;
  if (t < split) {
    const double level = std::min(pi0 + t, std::nextafter(1.0, 0.0));
    return g.quantile(level);
  }
  const double level = t - split;
  if (level <= 0.0) {
    // G^-1(0+) is the lower end of the support.
    return g.is_empirical() ? g.as_empirical().values().front() : -std::numeric_limits<double>::infinity();
  }
  return g.quantile(level);
}

double coupling_violation_measure(const DistributionModel& f, const DistributionModel& g, double pi0,
                                  const GridSpec& grid) {
  const auto t = grid.interior_points();
  const auto qf = quantiles_on_grid(f, grid);
  std::size_t count = 0;
  for (std::size_t j = 0; j < t.size(); ++j) count += qf[j] > rearranged_quantile(g, pi0, t[j]);
  return static_cast<double>(count) / static_cast<double>(t.size());
}

double optimal_copula_eval(double pi0, double x, double y) {
  if (!(pi0 >= 0.0 && pi0 < 1.0)) throw DomainError("copula: pi0 must lie in [0,1)");
  if (!(x >= 0.0 && x <= 1.0 && y >= 0.0 && y <= 1.0)) throw DomainError("copula: arguments must lie in [0,1]");
  const bool upper_x = x >= 1.0 - pi0;
  const bool upper_y = y >= pi0;
  if (!upper_x && !upper_y) return 0.0;
  if (upper_x && !upper_y) return std::min(x - (1.0 - pi0), y);
  if (!upper_x && upper_y) return std::min(x, y - pi0);
  return std::max(0.0, x + y - 1.0);
}

// ---------------------------------------------------------------------------
// Report

IndexReport index_report(const DistributionModel& f, const DistributionModel& g, const GridSpec& grid) {
  IndexReport r;
  r.grid_size = grid.size;
  r.gamma = gamma_index(f, g, grid);
  r.gamma_reversed = gamma_index(g, f, grid);
  r.rho = rho_index(f, g);
  r.rho_reversed = rho_index(g, f);
  r.pi = pi_index(f, g);
  r.pi_reversed = pi_index(g, f);
  r.vartheta = 1.0 - r.pi_reversed;
  r.epsilon = epsilon_index(f, g);
  r.tie_flag = (f.is_empirical() && f.as_empirical().has_ties()) || (g.is_empirical() && g.as_empirical().has_ties());

  if (r.pi + r.pi_reversed > 1.0 + 1e-9) throw std::logic_error("index report: pi + reversed pi exceeds 1");
  // The coupling bounds hold exactly; the tolerances absorb grid and quadrature error.
  if (r.pi > r.rho + 1e-6) throw std::logic_error("index report: pi exceeds rho");
  if (r.pi > r.gamma + 0.01) throw std::logic_error("index report: pi exceeds gamma beyond grid resolution");
  return r;
}

}  // namespace stochord
