#include "stochord/bridge.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <sstream>

#include "stochord/errors.hpp"
#include "stochord/numeric.hpp"
#include "stochord/parallel.hpp"

namespace stochord {

double BridgePath::at(double t) const noexcept {
  const std::size_t m = grid_size();
  const double pos = std::clamp(t, 0.0, 1.0) * static_cast<double>(m);
  const std::size_t j = std::min(static_cast<std::size_t>(pos), m - 1);
  const double w = pos - static_cast<double>(j);
  return (1.0 - w) * values_[j] + w * values_[j + 1];
}

BridgePath bridge_path(std::size_t m, SeedSpec seed) {
  if (m < 2 || (m & (m - 1)) != 0) throw DomainError("bridge grid size must be a power of two >= 2");
  RandomStream rng(seed);
  const double step = 1.0 / std::sqrt(static_cast<double>(m));
  std::vector<double> w(m + 1, 0.0);
  for (std::size_t j = 1; j <= m; ++j) w[j] = w[j - 1] + step * rng.normal();
  const double end = w[m];
  for (std::size_t j = 1; j < m; ++j) w[j] -= static_cast<double>(j) / static_cast<double>(m) * end;
  w[m] = 0.0;
  return BridgePath(std::move(w));
}

// ---------------------------------------------------------------------------
// SubsetSpec

SubsetSpec::SubsetSpec(std::vector<Interval> intervals) : intervals_(std::move(intervals)) {
  std::sort(intervals_.begin(), intervals_.end(), [](const Interval& a, const Interval& b) { return a.lo < b.lo; });
  double prev = 0.0;
  for (const auto& iv : intervals_) {
    if (!(iv.lo >= 0.0 && iv.hi <= 1.0 && iv.lo <= iv.hi))
      throw DomainError("subset intervals must satisfy 0 <= lo <= hi <= 1");
    if (iv.lo < prev) throw DomainError("subset intervals overlap");
    prev = iv.hi;
  }
}

namespace {
double parse_endpoint(const std::string& text) {
  auto parse_double = [&](const std::string& s) {
    double v = 0.0;
    const auto res = std::from_chars(s.data(), s.data() + s.size(), v);
    if (res.ec != std::errc() || res.ptr != s.data() + s.size())
      throw ParameterError("bad subset endpoint '" + text + "'");
    return v;
  };
  const auto slash = text.find('/');
  if (slash == std::string::npos) return parse_double(text);
  const double den = parse_double(text.substr(slash + 1));
  if (den == 0.0) throw ParameterError("bad subset endpoint '" + text + "'");
  return parse_double(text.substr(0, slash)) / den;
}
}  // namespace

SubsetSpec SubsetSpec::parse(const std::string& text) {
  std::vector<Interval> out;
  std::stringstream ss(text);
  std::string piece;
  while (std::getline(ss, piece, ',')) {
    if (piece.empty()) continue;
    const auto colon = piece.find(':');
    if (colon == std::string::npos) throw ParameterError("subset piece '" + piece + "' needs the form lo:hi");
    out.push_back({parse_endpoint(piece.substr(0, colon)), parse_endpoint(piece.substr(colon + 1))});
  }
  return SubsetSpec(std::move(out));
}

double SubsetSpec::length() const noexcept {
  double total = 0.0;
  for (const auto& iv : intervals_) total += iv.hi - iv.lo;
  return total;
}

bool SubsetSpec::contains(double t) const noexcept {
  for (const auto& iv : intervals_)
    if (t >= iv.lo && t < iv.hi) return true;
  return false;
}

double occupation_positive(const BridgePath& path, const SubsetSpec& subset) {
  const std::size_t m = path.grid_size();
  std::size_t count = 0;
  for (std::size_t j = 0; j <= m; ++j) {
    const double t = static_cast<double>(j) / static_cast<double>(m);
    if (path[j] > 0.0 && subset.contains(t)) ++count;
  }
  return static_cast<double>(count) / static_cast<double>(m);
}

std::vector<double> occupation_sample(std::size_t paths, std::size_t m, const SubsetSpec& subset, SeedSpec seed,
                                      unsigned threads) {
  std::vector<double> out(paths);
  parallel_for(paths, threads,
               [&](std::size_t i) { out[i] = occupation_positive(bridge_path(m, seed.substream(i)), subset); });
  return out;
}

std::vector<HistogramBin> histogram(const std::vector<double>& values, double lo, double hi, std::size_t bins) {
  if (bins == 0 || !(hi > lo)) throw DomainError("histogram needs bins > 0 and hi > lo");
  std::vector<HistogramBin> out(bins);
  const double width = (hi - lo) / static_cast<double>(bins);
  for (std::size_t b = 0; b < bins; ++b) {
    out[b].lo = lo + width * static_cast<double>(b);
    out[b].hi = b + 1 == bins ? hi : lo + width * static_cast<double>(b + 1);
  }
  for (double v : values) {
    // values outside [lo, hi] land in the end bins
    const double pos = std::floor((v - lo) / width);
    const auto b = static_cast<std::size_t>(std::clamp(pos, 0.0, static_cast<double>(bins - 1)));
    ++out[b].count;
  }
  for (auto& bin : out)
    bin.frequency = values.empty() ? 0.0 : static_cast<double>(bin.count) / static_cast<double>(values.size());
  return out;
}

std::pair<DistributionModel, DistributionModel> coincident_quantile_pair(double delta) {
  if (!(delta > 0.0)) throw DomainError("delta must be positive");
  const double a = 1.0 / 3.0;
  const double b = 2.0 / 3.0;
  auto g = DistributionModel::piecewise_linear_quantile({
      {0.0, a, -delta, a - delta},
      {a, b, a, b},
      {b, 1.0, b + delta, 1.0 + delta},
  });
  return {DistributionModel::uniform(0.0, 1.0), std::move(g)};
}

NonconsistencySummary nonconsistency_demo(const DistributionModel& f, const DistributionModel& g, std::size_t n,
                                          std::size_t m, std::size_t reps, const GridSpec& grid, SeedSpec seed,
                                          unsigned threads) {
  if (n == 0 || m == 0 || reps < 2) throw DomainError("nonconsistency demo needs n, m >= 1 and reps >= 2");
  NonconsistencySummary s;
  s.n = n;
  s.m = m;
  s.reps = reps;
  s.gamma = gamma_index(f, g, grid);
  const auto qf = quantiles_on_grid(f, grid);
  const auto qg = quantiles_on_grid(g, grid);
  std::size_t equal = 0, run = 0, longest = 0;
  for (std::size_t j = 0; j < qf.size(); ++j) {
    const double scale = std::max({1.0, std::abs(qf[j]), std::abs(qg[j])});
    const bool same = std::abs(qf[j] - qg[j]) <= 1e-12 * scale;
    equal += same;
    run = same ? run + 1 : 0;
    longest = std::max(longest, run);
  }
  s.coincidence_measure = static_cast<double>(equal) / static_cast<double>(qf.size());
  // isolated contact points (a crossing hit exactly by the grid) carry no length
  s.degenerate = longest < 3;

  s.deviations.resize(reps);
  parallel_for(reps, threads, [&](std::size_t r) {
    const SeedSpec rs = seed.substream(r);
    const EmpiricalDistribution fx(f.sample(n, rs.substream(0)));
    const EmpiricalDistribution gy(g.sample(m, rs.substream(1)));
    s.deviations[r] = gamma_exact(fx, gy) - s.gamma;
  });
  const auto ms = mean_sd(s.deviations);
  s.mean = ms.mean;
  s.sd = ms.sd;
  s.mc_se = ms.sd / std::sqrt(static_cast<double>(reps));
  s.histogram = histogram(s.deviations, -0.5, 0.5, 50);
  return s;
}

}  // namespace stochord
