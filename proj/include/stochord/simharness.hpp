#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "stochord/distributions.hpp"
#include "stochord/indices.hpp"
#include "stochord/inference.hpp"
#include "stochord/random.hpp"

namespace stochord {

/// The two families of the simulation study: a normal against a noncentral
/// t with one degree of freedom, and a normal against a two-component normal
/// mixture.
enum class ScenarioFamily { t1, mixture };
std::string_view to_string(ScenarioFamily family);
ScenarioFamily parse_scenario_family(std::string_view name);

struct Scenario {
  std::string name;
  DistributionModel f;
  DistributionModel g;
  double nominal_gamma = 0.0;
  int case_id = 0;  // 1..4 for built-ins, 0 otherwise
  ScenarioFamily family = ScenarioFamily::t1;
};

/// Built-in cases 1..4. The pair is ordered so that gamma(F, G) is the
/// nominal value: for the t family F is the t law and G the normal.
Scenario builtin_scenario(int case_id, ScenarioFamily family);
std::vector<Scenario> builtin_scenarios();

/// gamma(F, G) on the fine grid.
double verify_nominal_gamma(const Scenario& scenario, const GridSpec& grid = GridSpec::uniform(kStudyGridSize));

struct ExperimentResult {
  std::string scenario;
  double gamma0 = 0.0;
  std::size_t n = 0;
  std::size_t reps = 0;
  std::size_t B = 0;
  double alpha = kDefaultAlpha;
  std::size_t grid_size = kDefaultGridSize;
  std::size_t rejections = 0;
  double proportion = 0.0;
  double mc_se = 0.0;  // sqrt(p(1-p)/reps)
  SeedSpec seed;
  double wall_seconds = 0.0;  // informational; not part of reproducible output
};

/// Stream for one table cell, a function of the master seed and the cell
/// coordinates only, so a cell gives the same answer alone or inside a table.
SeedSpec table1_cell_seed(std::uint64_t master, const Scenario& scenario, double gamma0, std::size_t n);

/// Rejection rate of H0: gamma >= gamma0 over `reps` independent pairs of
/// samples of size n. Replicate r draws from seed.substream(r).
ExperimentResult run_table1_cell(const Scenario& scenario, double gamma0, std::size_t n, std::size_t reps,
                                 std::size_t B, double alpha, SeedSpec seed, unsigned threads = 1,
                                 const GridSpec& grid = GridSpec::uniform(kDefaultGridSize));

struct Table1Entry {
  ScenarioFamily family;
  int case_id;
  double gamma0;
  std::size_t n;
  double proportion;
};
/// Published rejection proportions (reps = 1000, B = 1000, level 0.05).
const std::vector<Table1Entry>& table1_reference();
std::optional<double> table1_reference_value(ScenarioFamily family, int case_id, double gamma0, std::size_t n);

inline constexpr double kTable1Gamma0[] = {0.02, 0.05, 0.10, 0.20};
inline constexpr std::size_t kTable1SampleSizes[] = {100, 1000, 5000};

struct AsymptoticLawResult {
  std::vector<double> draws;  // sqrt(nm/(n+m)) (gamma_hat - gamma)
  double variance = 0.0;      // closed-form limit variance
  double gamma = 0.0;
  double lambda = 0.5;
  CrossingSpec crossings;
  std::optional<double> ks_distance;  // to N(0, variance); empty when variance is 0
};

/// Draws of the normalized plug-in error for an analytic pair with clean
/// crossings, using the exact sample measure for gamma_hat.
AsymptoticLawResult asymptotic_law_experiment(const DistributionModel& f, const DistributionModel& g, std::size_t n,
                                              std::size_t m, std::size_t reps, SeedSpec seed, unsigned threads = 1);

}  // namespace stochord
