#include "stochord/simharness.hpp"

#include <chrono>
#include <cmath>
#include <string>

#include "stochord/errors.hpp"
#include "stochord/numeric.hpp"
#include "stochord/parallel.hpp"

namespace stochord {

std::string_view to_string(ScenarioFamily family) { return family == ScenarioFamily::t1 ? "t1" : "mixture"; }

ScenarioFamily parse_scenario_family(std::string_view name) {
  if (name == "t1" || name == "t") return ScenarioFamily::t1;
  if (name == "mixture") return ScenarioFamily::mixture;
  throw ParameterError("unknown scenario family '" + std::string(name) + "' (expected t1 or mixture)");
}

Scenario builtin_scenario(int case_id, ScenarioFamily family) {
  static constexpr double kNominal[] = {0.02, 0.05, 0.10, 0.20};
  if (case_id < 1 || case_id > 4) throw ParameterError("built-in cases are numbered 1 to 4");
  Scenario s{.name = "case" + std::to_string(case_id) + "-" + std::string(to_string(family)),
             .f = DistributionModel::normal(0, 1),
             .g = DistributionModel::normal(0, 1),
             .nominal_gamma = kNominal[case_id - 1],
             .case_id = case_id,
             .family = family};
  if (family == ScenarioFamily::t1) {
    // the t law has the heavier tails on both sides, so it plays F
    switch (case_id) {
      case 1:
        s.f = DistributionModel::noncentral_t1(0.167);
        s.g = DistributionModel::normal(13, 11);
        break;
      case 2:
        s.f = DistributionModel::noncentral_t1(0.5);
        s.g = DistributionModel::normal(13.13, 10);
        break;
      case 3:
        s.f = DistributionModel::noncentral_t1(0.0);
        s.g = DistributionModel::normal(1.061, 2.9);
        break;
      default:
        s.f = DistributionModel::noncentral_t1(0.0);
        s.g = DistributionModel::normal(0.634, 2.5);
        break;
    }
  } else {
    switch (case_id) {
      case 1:
        s.f = DistributionModel::normal(0, 1.4135);
        s.g = DistributionModel::mixture({{0.02, -4, 3}, {0.98, 1, 1}});
        break;
      case 2:
        s.f = DistributionModel::normal(0, 1.5);
        s.g = DistributionModel::mixture({{0.03, -4, 1}, {0.97, 1, 1}});
        break;
      case 3:
        s.f = DistributionModel::normal(0, 1.6);
        s.g = DistributionModel::mixture({{0.05, -5, 1.4}, {0.95, 1, 1}});
        break;
      default:
        s.f = DistributionModel::normal(0, 1.75);
        s.g = DistributionModel::mixture({{0.1, -5, 1.75}, {0.9, 1, 1}});
        break;
    }
  }
  return s;
}

std::vector<Scenario> builtin_scenarios() {
  std::vector<Scenario> out;
  for (auto family : {ScenarioFamily::t1, ScenarioFamily::mixture})
    for (int c = 1; c <= 4; ++c) out.push_back(builtin_scenario(c, family));
  return out;
}

double verify_nominal_gamma(const Scenario& scenario, const GridSpec& grid) {
  return gamma_index(scenario.f, scenario.g, grid);
}

SeedSpec table1_cell_seed(std::uint64_t master, const Scenario& scenario, double gamma0, std::size_t n) {
  // name hash keeps user scenarios apart from built-ins
  std::uint64_t h = 0xcbf29ce484222325ull;
  for (unsigned char c : scenario.name) h = (h ^ c) * 0x100000001b3ull;
  const auto g = static_cast<std::uint64_t>(std::llround(gamma0 * 1e6));
  return SeedSpec{master, 0}.substream(h).substream(g).substream(n);
}

ExperimentResult run_table1_cell(const Scenario& scenario, double gamma0, std::size_t n, std::size_t reps,
                                 std::size_t B, double alpha, SeedSpec seed, unsigned threads, const GridSpec& grid) {
  if (reps < 1) throw DomainError("a table cell needs reps >= 1");
  if (n < 1) throw DomainError("a table cell needs n >= 1");
  const auto start = std::chrono::steady_clock::now();
  std::vector<unsigned char> rejected(reps, 0);
  parallel_for(reps, threads, [&](std::size_t r) {
    const SeedSpec rs = seed.substream(r);
    const auto xs = scenario.f.sample(n, rs.substream(0));
    const auto ys = scenario.g.sample(n, rs.substream(1));
    rejected[r] = gamma_threshold_test(xs, ys, gamma0, alpha, B, grid, rs.substream(2)).reject;
  });
  ExperimentResult res;
  res.scenario = scenario.name;
  res.gamma0 = gamma0;
  res.n = n;
  res.reps = reps;
  res.B = B;
  res.alpha = alpha;
  res.grid_size = grid.size;
  res.seed = seed;
  for (auto v : rejected) res.rejections += v;
  res.proportion = static_cast<double>(res.rejections) / static_cast<double>(reps);
  res.mc_se = std::sqrt(res.proportion * (1.0 - res.proportion) / static_cast<double>(reps));
  res.wall_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return res;
}

const std::vector<Table1Entry>& table1_reference() {
  static const std::vector<Table1Entry> table = [] {
    // rows: gamma0 x n; columns: t cases 1-4 then mixture cases 1-4
    static constexpr double kValues[4][3][8] = {
        {{.011, .010, 0, 0, .035, .012, 0, 0},
         {.019, .001, 0, 0, .045, .000, 0, 0},
         {.041, .000, 0, 0, .076, .000, 0, 0}},
        {{.142, .131, .001, .001, .240, .070, .004, 0},
         {.361, .172, 0, 0, .806, .077, 0, 0},
         {.512, .135, 0, 0, .996, .059, 0, 0}},
        {{.477, .455, .033, .008, .644, .327, .097, .002},
         {.787, .739, .060, .003, .996, .819, .074, 0},
         {.997, .999, .115, 0, 1, 1, .063, 0}},
        {{.894, .929, .208, .099, .931, .812, .513, .097},
         {1, 1, .462, .197, 1, 1, .984, .062},
         {1, 1, .635, .100, 1, 1, 1, .037}},
    };
    std::vector<Table1Entry> out;
    for (int gi = 0; gi < 4; ++gi)
      for (int ni = 0; ni < 3; ++ni)
        for (int col = 0; col < 8; ++col)
          out.push_back({col < 4 ? ScenarioFamily::t1 : ScenarioFamily::mixture, col % 4 + 1, kTable1Gamma0[gi],
                         kTable1SampleSizes[ni], kValues[gi][ni][col]});
    return out;
  }();
  return table;
}

std::optional<double> table1_reference_value(ScenarioFamily family, int case_id, double gamma0, std::size_t n) {
  for (const auto& e : table1_reference())
    if (e.family == family && e.case_id == case_id && std::abs(e.gamma0 - gamma0) < 1e-9 && e.n == n)
      return e.proportion;
  return std::nullopt;
}

AsymptoticLawResult asymptotic_law_experiment(const DistributionModel& f, const DistributionModel& g, std::size_t n,
                                              std::size_t m, std::size_t reps, SeedSpec seed, unsigned threads) {
  if (n < 1 || m < 1 || reps < 1) throw DomainError("asymptotic experiment needs n, m, reps >= 1");
  AsymptoticLawResult res;
  res.lambda = static_cast<double>(n) / static_cast<double>(n + m);
  res.crossings = find_crossings(f, g, res.lambda);
  res.gamma = gamma_from_crossings(f, g, res.crossings);
  res.variance = gamma_limit_variance(res.crossings);
  const double scale = std::sqrt(static_cast<double>(n) * static_cast<double>(m) / static_cast<double>(n + m));
  res.draws.resize(reps);
  parallel_for(reps, threads, [&](std::size_t r) {
    const SeedSpec rs = seed.substream(r);
    const EmpiricalDistribution x(f.sample(n, rs.substream(0)));
    const EmpiricalDistribution y(g.sample(m, rs.substream(1)));
    res.draws[r] = scale * (gamma_exact(x, y) - res.gamma);
  });
  if (res.variance > 0.0) {
    const double sd = std::sqrt(res.variance);
    res.ks_distance = ks_distance(res.draws, [sd](double v) { return normal_cdf(v / sd); });
  }
  return res;
}

}  // namespace stochord
