#include "stochord/inference.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <string>

#include "stochord/errors.hpp"
#include "stochord/numeric.hpp"
#include "stochord/parallel.hpp"

namespace stochord {

namespace {

std::vector<double> sorted_copy(std::span<const double> values, const char* what) {
  if (values.empty()) throw DomainError(std::string(what) + " sample is empty");
  std::vector<double> out(values.begin(), values.end());
  for (double v : out)
    if (!std::isfinite(v)) throw DomainError(std::string(what) + " sample has a non-finite value");
  std::sort(out.begin(), out.end());
  return out;
}

// 0-based order-statistic index used at each interior grid level.
std::vector<std::size_t> grid_ranks(const GridSpec& grid, std::size_t n) {
  std::vector<std::size_t> ranks(grid.interior_count());
  for (std::size_t j = 0; j < ranks.size(); ++j) ranks[j] = grid.empirical_rank(j, n) - 1;
  return ranks;
}

double gamma_sorted(const std::vector<double>& x, const std::vector<double>& y, const std::vector<std::size_t>& rx,
                    const std::vector<std::size_t>& ry) {
  std::size_t count = 0;
  for (std::size_t j = 0; j < rx.size(); ++j) count += x[rx[j]] > y[ry[j]];
  return static_cast<double>(count) / static_cast<double>(rx.size());
}

// Sorted bootstrap resample: multiplicities of each order statistic, then expand.
void resample_sorted(const std::vector<double>& sorted, RandomStream& rng, std::vector<std::uint32_t>& counts,
                     std::vector<double>& out) {
  const std::size_t n = sorted.size();
  std::fill(counts.begin(), counts.end(), 0u);
  for (std::size_t i = 0; i < n; ++i) ++counts[rng.below(n)];
  out.clear();
  for (std::size_t i = 0; i < n; ++i) out.insert(out.end(), counts[i], sorted[i]);
}

}  // namespace

GaltonResult galton_test(std::span<const double> xs, std::span<const double> ys) {
  if (xs.size() != ys.size())
    throw DomainError("galton test needs samples of equal size (got " + std::to_string(xs.size()) + " and " +
                      std::to_string(ys.size()) + ")");
  const auto x = sorted_copy(xs, "x");
  const auto y = sorted_copy(ys, "y");
  GaltonResult r;
  r.n = x.size();
  for (std::size_t i = 0; i < r.n; ++i) {
    r.count += x[i] > y[i];
    r.tie_flag = r.tie_flag || x[i] == y[i];
  }
  r.p_value = static_cast<double>(r.count + 1) / static_cast<double>(r.n + 1);
  return r;
}

double gamma_plugin(std::span<const double> xs, std::span<const double> ys, const GridSpec& grid) {
  const auto x = sorted_copy(xs, "x");
  const auto y = sorted_copy(ys, "y");
  return gamma_sorted(x, y, grid_ranks(grid, x.size()), grid_ranks(grid, y.size()));
}

IndexKind parse_index_kind(std::string_view name) {
  if (name == "gamma") return IndexKind::gamma;
  if (name == "pi") return IndexKind::pi;
  if (name == "rho") return IndexKind::rho;
  throw ParameterError("unknown index kind '" + std::string(name) + "' (expected gamma, pi or rho)");
}

std::string_view to_string(IndexKind kind) {
  switch (kind) {
    case IndexKind::gamma: return "gamma";
    case IndexKind::pi: return "pi";
    case IndexKind::rho: return "rho";
  }
  return "gamma";
}

std::vector<double> bootstrap_replicates(std::span<const double> xs, std::span<const double> ys, IndexKind kind,
                                         std::size_t B, const GridSpec& grid, SeedSpec seed, unsigned threads) {
  if (B < 2) throw DomainError("bootstrap needs B >= 2");
  const auto x = sorted_copy(xs, "x");
  const auto y = sorted_copy(ys, "y");
  const auto rx = grid_ranks(grid, x.size());
  const auto ry = grid_ranks(grid, y.size());
  std::vector<double> out(B);
  // Contiguous blocks per worker so scratch buffers are reused.
  const std::size_t workers = std::max<std::size_t>(1, std::min<std::size_t>(threads, B));
  parallel_for(workers, static_cast<unsigned>(workers), [&](std::size_t w) {
    std::vector<std::uint32_t> cx(x.size()), cy(y.size());
    std::vector<double> bx, by;
    bx.reserve(x.size());
    by.reserve(y.size());
    for (std::size_t b = B * w / workers; b < B * (w + 1) / workers; ++b) {
      RandomStream rng(seed.substream(b));
      resample_sorted(x, rng, cx, bx);
      resample_sorted(y, rng, cy, by);
      switch (kind) {
        case IndexKind::gamma:
          out[b] = gamma_sorted(bx, by, rx, ry);
          break;
        case IndexKind::pi:
          out[b] = pi_index(DistributionModel::empirical(bx), DistributionModel::empirical(by));
          break;
        case IndexKind::rho: {
          const EmpiricalDistribution ex(bx), ey(by);
          out[b] = static_cast<double>(count_exceedances(ex, ey)) /
                   (static_cast<double>(bx.size()) * static_cast<double>(by.size()));
          break;
        }
      }
    }
  });
  return out;
}

double bootstrap_sd(std::span<const double> xs, std::span<const double> ys, IndexKind kind, std::size_t B,
                    const GridSpec& grid, SeedSpec seed, unsigned threads) {
  const auto reps = bootstrap_replicates(xs, ys, kind, B, grid, seed, threads);
  return mean_sd(reps).sd;
}

TestResult gamma_threshold_test(std::span<const double> xs, std::span<const double> ys, double gamma0, double alpha,
                                std::size_t B, const GridSpec& grid, SeedSpec seed, unsigned threads) {
  if (!(gamma0 >= 0.0 && gamma0 <= 1.0)) throw DomainError("gamma0 must lie in [0,1]");
  if (!(alpha > 0.0 && alpha < 1.0)) throw DomainError("alpha must lie in (0,1)");
  TestResult r;
  r.estimate = gamma_plugin(xs, ys, grid);
  r.bootstrap_sd = bootstrap_sd(xs, ys, IndexKind::gamma, B, grid, seed, threads);
  r.alpha = alpha;
  r.gamma0 = gamma0;
  r.B = B;
  r.n = xs.size();
  r.m = ys.size();
  r.grid = grid;
  r.seed = seed;
  r.degenerate = r.bootstrap_sd == 0.0;
  const double z = normal_quantile(alpha);
  r.bound_u = r.estimate - r.bootstrap_sd * z;
  r.bound_v = r.estimate + r.bootstrap_sd * z;
  r.reject = r.bound_u < gamma0;
  return r;
}

// ---------------------------------------------------------------------------
// limit laws

void CrossingSpec::validate() const {
  if (!(lambda > 0.0 && lambda < 1.0)) throw DomainError("lambda must lie in (0,1)");
  double prev = 0.0;
  for (const auto& p : points) {
    if (!(p.t > prev && p.t < 1.0)) throw DomainError("crossing levels must be strictly increasing in (0,1)");
    prev = p.t;
    if (!(p.f >= 0.0 && p.g >= 0.0) || !std::isfinite(p.f) || !std::isfinite(p.g))
      throw DomainError("crossing densities must be finite and nonnegative");
    if (p.f == p.g)
      throw AssumptionError("equal densities at crossing t=" + std::to_string(p.t) + ": the limit is singular");
  }
}

CrossingSpec find_crossings(const DistributionModel& f, const DistributionModel& g, double lambda,
                            const GridSpec& grid) {
  if (f.is_empirical() || g.is_empirical()) throw DomainError("crossings need analytic models with densities");
  const auto ts = grid.interior_points();
  const auto qf = quantiles_on_grid(f, grid);
  const auto qg = quantiles_on_grid(g, grid);
  auto sign_at = [](double d) { return (d > 0.0) - (d < 0.0); };

  CrossingSpec cross;
  cross.lambda = lambda;
  std::size_t last = ts.size();  // index of the last nonzero difference
  for (std::size_t j = 0; j < ts.size(); ++j) {
    const int s = sign_at(qf[j] - qg[j]);
    if (s == 0) continue;
    if (last < ts.size() && s != sign_at(qf[last] - qg[last])) {
      if (j - last > 2) throw AssumptionError("quantile functions coincide on an interval near t=" +
                                              std::to_string(ts[last]));
      const int s_lo = sign_at(qf[last] - qg[last]);
      double lo = ts[last];
      double hi = ts[j];
      for (int it = 0; it < 200 && hi - lo > 1e-15; ++it) {
        const double mid = 0.5 * (lo + hi);
        if (mid <= lo || mid >= hi) break;
        if (sign_at(f.quantile(mid) - g.quantile(mid)) == s_lo)
          lo = mid;
        else
          hi = mid;
      }
      CrossingSpec::Point p;
      p.t = 0.5 * (lo + hi);
      p.x = 0.5 * (f.quantile(p.t) + g.quantile(p.t));
      p.f = f.density(p.x);
      p.g = g.density(p.x);
      if (std::abs(p.f - p.g) <= 1e-3 * std::max(p.f, p.g))
        throw AssumptionError("densities agree at the crossing t=" + std::to_string(p.t) +
                              " (within 1e-3 relative); the normal limit does not apply");
      cross.points.push_back(p);
    }
    last = j;
  }
  cross.validate();
  return cross;
}

double gamma_from_crossings(const DistributionModel& f, const DistributionModel& g, const CrossingSpec& cross) {
  std::vector<double> cuts{0.0};
  for (const auto& p : cross.points) cuts.push_back(p.t);
  cuts.push_back(1.0);
  double total = 0.0;
  for (std::size_t i = 0; i + 1 < cuts.size(); ++i) {
    const double mid = 0.5 * (cuts[i] + cuts[i + 1]);
    if (f.quantile(mid) > g.quantile(mid)) total += cuts[i + 1] - cuts[i];
  }
  return total;
}

double gamma_limit_variance(const CrossingSpec& cross) {
  cross.validate();
  const double lambda = cross.lambda;
  double var = 0.0;
  for (const auto& a : cross.points) {
    for (const auto& b : cross.points) {
      const double cov = std::min(a.t, b.t) - a.t * b.t;
      const double num = (1.0 - lambda) * a.g * b.g + lambda * a.f * b.f;
      var += num * cov / (std::abs(a.f - a.g) * std::abs(b.f - b.g));
    }
  }
  return var;
}

double default_gamma_set_tolerance(double pi) { return std::max(1e-3 * pi, 1e-12); }

std::vector<double> pi_limit_sample(const DistributionModel& f, const DistributionModel& g, double lambda,
                                    double gamma_set_tolerance, const GridSpec& grid, std::size_t n_paths,
                                    SeedSpec seed, std::size_t bridge_grid, unsigned threads) {
  if (!(lambda > 0.0 && lambda < 1.0)) throw DomainError("lambda must lie in (0,1)");
  if (!(gamma_set_tolerance > 0.0)) throw DomainError("gamma set tolerance must be positive");

  std::vector<double> xs = quantiles_on_grid(f, grid);
  const auto qg = quantiles_on_grid(g, grid);
  xs.insert(xs.end(), qg.begin(), qg.end());
  xs.push_back(pi_argmax(f, g).x);
  std::sort(xs.begin(), xs.end());
  xs.erase(std::unique(xs.begin(), xs.end()), xs.end());

  std::vector<double> diff(xs.size());
  for (std::size_t i = 0; i < xs.size(); ++i) diff[i] = g.cdf(xs[i]) - f.cdf(xs[i]);
  const double top = std::max(0.0, *std::max_element(diff.begin(), diff.end()));
  std::vector<double> uf, ug;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    if (diff[i] >= top - gamma_set_tolerance) {
      uf.push_back(f.cdf(xs[i]));
      ug.push_back(g.cdf(xs[i]));
    }
  }
  // pi = 0 with G below F everywhere except the tails: the sup set is the
  // boundary, where both bridges vanish.
  if (uf.empty()) {
    uf.push_back(0.0);
    ug.push_back(0.0);
  }

  const double a = std::sqrt(lambda);
  const double b = std::sqrt(1.0 - lambda);
  std::vector<double> out(n_paths);
  parallel_for(n_paths, threads, [&](std::size_t p) {
    const SeedSpec s = seed.substream(p);
    const BridgePath b1 = bridge_path(bridge_grid, s.substream(0));
    const BridgePath b2 = bridge_path(bridge_grid, s.substream(1));
    double best = -std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < uf.size(); ++i) best = std::max(best, a * b1.at(ug[i]) - b * b2.at(uf[i]));
    out[p] = best;
  });
  return out;
}

}  // namespace stochord
