#include "stochord/cli.hpp"

#include <algorithm>
#include <charconv>
#include <chrono>
#include <cmath>
#include <cstdlib>
#include <ctime>
#include <filesystem>
#include <map>
#include <ostream>

#include <CLI11.hpp>

#include "stochord/errors.hpp"
#include "stochord/numeric.hpp"

namespace stochord {

namespace fs = std::filesystem;

namespace {

const std::vector<std::string> kSubcommands = {"indices",   "galton",    "test-gamma",    "simulate-table",
                                               "bridge-lab", "limit-law", "quantile-table"};

std::size_t or_default(const std::optional<std::size_t>& v, std::size_t d) { return v ? *v : d; }

GridSpec grid_of(const CommandConfig& c) {
  if (c.grid_layout == "rank_aligned") return GridSpec::rank_aligned(c.grid);
  return GridSpec::uniform(c.grid);
}

// Subcommand defaults, filled in before anything is embedded or run.
CommandConfig resolved(CommandConfig c) {
  c.seed = resolve_seed(c.seed);
  const auto& s = c.subcommand;
  if (s == "test-gamma") c.B = or_default(c.B, kDefaultBootstrap);
  if (s == "simulate-table") {
    c.B = or_default(c.B, 200);
    c.reps = or_default(c.reps, 200);
    if (c.cases.empty()) c.cases = {1, 2, 3, 4};
    if (c.families.empty()) c.families = {"t1", "mixture"};
    if (c.gamma0s.empty()) c.gamma0s.assign(std::begin(kTable1Gamma0), std::end(kTable1Gamma0));
    if (c.sizes.empty()) c.sizes = {100, 1000};
  }
  if (s == "bridge-lab" && c.mode == "nonconsistency") {
    c.n = or_default(c.n, 10000);
    c.m = or_default(c.m, *c.n);
    c.reps = or_default(c.reps, 2000);
  }
  if (s == "limit-law") {
    if (c.f.empty()) c.f = R"({"kind":"normal","mean":0,"sd":1})";
    if (c.g.empty()) c.g = R"({"kind":"normal","mean":0,"sd":2})";
    if (c.kind == "gamma") {
      c.n = or_default(c.n, 5000);
      c.m = or_default(c.m, *c.n);
      c.reps = or_default(c.reps, 2000);
    }
  }
  return c;
}

Json descriptor(const std::string& spec, bool header) {
  return spec.empty() ? Json(nullptr) : load_model_descriptor(spec, header);
}

std::string spec_from_json(const Json& j) {
  if (j.is_null()) return {};
  if (j.is_string()) return j.get<std::string>();
  return j.dump();
}

DistributionModel model_of(const std::string& spec, bool header) {
  return parse_model(load_model_descriptor(spec, header));
}

std::string utc_now() {
  const auto now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&now, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

struct Output {
  fs::path dir;
  std::string started = utc_now();
  std::chrono::steady_clock::time_point t0 = std::chrono::steady_clock::now();

  void file(const std::string& name, std::string_view content) const { write_file_atomic(dir / name, content); }

  // Main report plus a timing sidecar; the report itself holds no clock values.
  void report(const std::string& name, const Json& report, unsigned threads, std::ostream& out) const {
    const std::string text = report.dump(2) + "\n";
    file(name + ".json", text);
    const double wall = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    Json timing{{"report", name + ".json"}, {"started_utc", started}, {"wall_seconds", wall}, {"threads", threads}};
    file(name + ".timing.json", timing.dump(2) + "\n");
    out << text;
  }
};

Json make_report(const CommandConfig& c, Json result) {
  const Json cfg = config_to_json(c);
  return Json{{"tool", "stochord"},
              {"version", kVersion},
              {"command", c.subcommand},
              {"config", cfg},
              {"config_hash", config_hash(cfg)},
              {"result", std::move(result)}};
}

std::string draws_csv(const std::vector<double>& draws) { return sample_csv(draws, "draw"); }

// ---------------------------------------------------------------------------
// subcommands

void cmd_indices(const CommandConfig& c, const Output& o, std::ostream& out) {
  const auto f = model_of(c.f, c.header);
  const auto g = model_of(c.g, c.header);
  const auto rep = index_report(f, g, grid_of(c));
  Json result = to_json(rep);
  result["f"] = f.describe();
  result["g"] = g.describe();
  o.report("indices", make_report(c, result), c.threads, out);
}

void cmd_quantile_table(const CommandConfig& c, const Output& o, std::ostream& out) {
  const auto f = model_of(c.f, c.header);
  const auto g = model_of(c.g, c.header);
  const auto grid = grid_of(c);
  const auto csv = quantile_table_csv(f, g, grid);
  o.file("quantile_table.csv", csv);
  Json result{{"rows", static_cast<std::size_t>(std::count(csv.begin(), csv.end(), '\n') - 1)},
              {"gamma", gamma_index(f, g, grid)},
              {"table", "quantile_table.csv"}};
  o.report("quantile_table", make_report(c, result), c.threads, out);
}

void cmd_galton(const CommandConfig& c, const Output& o, std::ostream& out) {
  const auto x = load_sample_csv(c.x, c.header);
  const auto y = load_sample_csv(c.y, c.header);
  o.report("galton", make_report(c, to_json(galton_test(x, y))), c.threads, out);
}

void cmd_test_gamma(const CommandConfig& c, const Output& o, std::ostream& out) {
  const auto x = load_sample_csv(c.x, c.header);
  const auto y = load_sample_csv(c.y, c.header);
  const auto r = gamma_threshold_test(x, y, *c.gamma0, c.alpha, *c.B, grid_of(c), SeedSpec{*c.seed, 0}, c.threads);
  o.report("test_gamma", make_report(c, to_json(r)), c.threads, out);
}

void cmd_simulate_table(const CommandConfig& c, const Output& o, std::ostream& out) {
  std::vector<Scenario> scenarios;
  if (!c.scenario.empty()) {
    Json s;
    try {
      s = Json::parse(read_file(c.scenario));
    } catch (const Json::parse_error& e) {
      throw IngestionError(c.scenario + ": " + e.what());
    }
    const fs::path base = fs::path(c.scenario).parent_path();
    scenarios.push_back(Scenario{.name = s.value("name", "user"),
                                 .f = parse_model(s.at("f"), base),
                                 .g = parse_model(s.at("g"), base),
                                 .nominal_gamma = s.value("nominal_gamma", std::nan(""))});
  } else {
    for (const auto& fam : c.families)
      for (int k : c.cases) scenarios.push_back(builtin_scenario(k, parse_scenario_family(fam)));
  }
  const auto grid = grid_of(c);
  Json cells = Json::array();
  std::string long_csv = "scenario,family,case,gamma0,n,reps,B,rejections,proportion,mc_se,reference\n";
  // wide layout: one row per (gamma0, n), one column per scenario
  std::string wide = "gamma0,n";
  for (const auto& s : scenarios) wide += "," + s.name;
  wide += "\n";
  for (double g0 : c.gamma0s) {
    for (std::size_t n : c.sizes) {
      wide += format_double(g0) + "," + std::to_string(n);
      for (const auto& s : scenarios) {
        const auto r = run_table1_cell(s, g0, n, *c.reps, *c.B, c.alpha, table1_cell_seed(*c.seed, s, g0, n),
                                       c.threads, grid);
        const auto ref = s.case_id ? table1_reference_value(s.family, s.case_id, g0, n) : std::nullopt;
        const bool has_reference = ref.has_value();
        const double reference = ref.value_or(0.0);
        Json cell = to_json(r);
        cell["family"] = s.case_id ? Json(to_string(s.family)) : Json(nullptr);
        cell["case"] = s.case_id;
        cell["reference"] = has_reference ? Json(reference) : Json(nullptr);
        cells.push_back(cell);
        std::string reference_text;
        if (has_reference) reference_text = format_double(reference);
        long_csv += s.name + "," + (s.case_id ? std::string(to_string(s.family)) : "") + "," +
                    std::to_string(s.case_id) + "," + format_double(g0) + "," + std::to_string(n) + "," +
                    std::to_string(r.reps) + "," + std::to_string(r.B) + "," + std::to_string(r.rejections) + "," +
                    format_double(r.proportion) + "," + format_double(r.mc_se) + "," +
                    reference_text + "\n";
        wide += "," + format_double(r.proportion);
      }
      wide += "\n";
    }
  }
  o.file("table1.csv", wide);
  o.file("table1_cells.csv", long_csv);
  Json nominal = Json::object();
  for (const auto& s : scenarios) nominal[s.name] = verify_nominal_gamma(s);
  o.report("table1", make_report(c, Json{{"nominal_gamma", nominal}, {"cells", cells}}), c.threads, out);
}

void cmd_bridge_lab(const CommandConfig& c, const Output& o, std::ostream& out) {
  const SeedSpec seed{*c.seed, 0};
  if (c.mode == "occupation") {
    const auto subset = SubsetSpec::parse(c.subset);
    const auto occ = occupation_sample(c.paths, c.bridge_m, subset, seed, c.threads);
    const auto ms = mean_sd(occ);
    const auto bins = histogram(occ, 0.0, 1.0, 20);
    Json result{{"paths", c.paths},
                {"bridge_grid", c.bridge_m},
                {"subset_length", subset.length()},
                {"mean", ms.mean},
                {"sd", ms.sd},
                {"reference_mean", subset.length() / 2.0},
                {"mc_se", ms.sd / std::sqrt(static_cast<double>(c.paths))}};
    if (subset.length() == 1.0)
      result["ks_uniform"] = ks_distance(occ, [](double v) { return std::clamp(v, 0.0, 1.0); });
    o.file("bridge_occupation.csv", histogram_csv(bins));
    o.report("bridge_occupation", make_report(c, result), c.threads, out);
    return;
  }
  auto pair = coincident_quantile_pair(c.delta);
  if (!c.f.empty()) pair.first = model_of(c.f, c.header);
  if (!c.g.empty()) pair.second = model_of(c.g, c.header);
  const auto s = nonconsistency_demo(pair.first, pair.second, *c.n, *c.m, *c.reps, grid_of(c), seed, c.threads);
  Json result = to_json(s);
  if (s.degenerate) result["warning"] = "quantile functions coincide only on a null set; the demo reduces to consistency";
  o.file("nonconsistency.csv", histogram_csv(s.histogram));
  o.file("nonconsistency_draws.csv", draws_csv(s.deviations));
  o.report("nonconsistency", make_report(c, result), c.threads, out);
}

void cmd_limit_law(const CommandConfig& c, const Output& o, std::ostream& out) {
  const auto f = model_of(c.f, c.header);
  const auto g = model_of(c.g, c.header);
  const SeedSpec seed{*c.seed, 0};
  if (c.kind == "gamma") {
    const auto r = asymptotic_law_experiment(f, g, *c.n, *c.m, *c.reps, seed, c.threads);
    const auto ms = mean_sd(r.draws);
    Json result{{"gamma", r.gamma},
                {"lambda", r.lambda},
                {"variance", r.variance},
                {"crossings", to_json(r.crossings)},
                {"draw_mean", ms.mean},
                {"draw_variance", ms.sd * ms.sd},
                {"ks_distance", r.ks_distance ? Json(*r.ks_distance) : Json(nullptr)}};
    o.file("limit_law_draws.csv", draws_csv(r.draws));
    o.report("limit_law", make_report(c, result), c.threads, out);
    return;
  }
  const double pi = pi_index(f, g);
  const double tol = c.tolerance ? *c.tolerance : default_gamma_set_tolerance(pi);
  const auto draws = pi_limit_sample(f, g, c.lambda, tol, grid_of(c), c.paths, seed, c.bridge_m, c.threads);
  const auto ms = mean_sd(draws);
  Json result{{"pi", pi},       {"lambda", c.lambda},         {"tolerance", tol},
              {"paths", c.paths}, {"draw_mean", ms.mean}, {"draw_variance", ms.sd * ms.sd}};
  o.file("limit_law_draws.csv", draws_csv(draws));
  o.report("limit_law", make_report(c, result), c.threads, out);
}

int fail(std::ostream& err, int code, const std::string& kind, const std::string& message, long line = 0) {
  Json e{{"kind", kind}, {"exit_code", code}, {"message", message}};
  if (line > 0) e["line"] = line;
  err << Json{{"error", e}}.dump() << "\n";
  return code;
}

}  // namespace

// ---------------------------------------------------------------------------

void CommandConfig::validate() const {
  if (std::find(kSubcommands.begin(), kSubcommands.end(), subcommand) == kSubcommands.end())
    throw ParameterError("unknown subcommand '" + subcommand + "'");
  const auto need = [&](bool ok, const std::string& what) {
    if (!ok) throw ParameterError(subcommand + ": " + what);
  };
  need(grid >= 3 || (grid_layout == "rank_aligned" && grid >= 1), "--grid must be at least 3");
  need(grid_layout == "uniform" || grid_layout == "rank_aligned", "--grid-layout is uniform or rank_aligned");
  need(alpha > 0.0 && alpha < 1.0, "--alpha must lie in (0,1)");
  need(!B || *B >= 2, "--B must be at least 2");
  need(!reps || *reps >= 1, "--reps must be at least 1");
  need(threads >= 1, "--threads must be at least 1");
  if (subcommand == "indices" || subcommand == "quantile-table") {
    need(!f.empty() && !g.empty(), "--f and --g are required");
  } else if (subcommand == "galton") {
    need(!x.empty() && !y.empty(), "--x and --y are required");
  } else if (subcommand == "test-gamma") {
    need(!x.empty() && !y.empty(), "--x and --y are required");
    need(gamma0.has_value(), "--gamma0 is required");
    need(*gamma0 >= 0.0 && *gamma0 <= 1.0, "--gamma0 must lie in [0,1]");
  } else if (subcommand == "simulate-table") {
    for (int k : cases) need(k >= 1 && k <= 4, "--case values are 1 to 4");
    for (const auto& fam : families) need(fam == "t1" || fam == "t" || fam == "mixture", "--family is t1 or mixture");
    for (double g0 : gamma0s) need(g0 >= 0.0 && g0 <= 1.0, "--gamma0 values must lie in [0,1]");
    for (std::size_t n : sizes) need(n >= 1, "--n values must be positive");
  } else if (subcommand == "bridge-lab") {
    need(mode == "occupation" || mode == "nonconsistency", "--mode is occupation or nonconsistency");
    need(bridge_m >= 2 && (bridge_m & (bridge_m - 1)) == 0, "--bridge-grid must be a power of two >= 2");
    need(paths >= 1, "--paths must be positive");
    need(!n || *n >= 1, "--n must be positive");
    need(!m || *m >= 1, "--m must be positive");
    need(!reps || *reps >= 2, "--reps must be at least 2");
    need(delta > 0.0, "--delta must be positive");
    (void)SubsetSpec::parse(subset);
  } else if (subcommand == "limit-law") {
    need(kind == "gamma" || kind == "pi", "--kind is gamma or pi");
    need(lambda > 0.0 && lambda < 1.0, "--lambda must lie in (0,1)");
    need(!tolerance || *tolerance > 0.0, "--tolerance must be positive");
    need(bridge_m >= 2 && (bridge_m & (bridge_m - 1)) == 0, "--bridge-grid must be a power of two >= 2");
    need(!n || *n >= 1, "--n must be positive");
    need(!m || *m >= 1, "--m must be positive");
  }
}

std::uint64_t resolve_seed(const std::optional<std::uint64_t>& seed) {
  if (seed) return *seed;
  if (const char* env = std::getenv("STOCHORD_SEED"); env && *env) {
    std::uint64_t v = 0;
    const std::string_view s(env);
    const auto res = std::from_chars(s.data(), s.data() + s.size(), v);
    if (res.ec != std::errc() || res.ptr != s.data() + s.size())
      throw ParameterError("STOCHORD_SEED must be an unsigned integer");
    return v;
  }
  return 1;
}

Json config_to_json(const CommandConfig& raw) {
  const CommandConfig c = resolved(raw);
  const auto& s = c.subcommand;
  Json j{{"subcommand", s}};
  auto grid = [&] {
    j["grid"] = c.grid;
    j["grid_layout"] = c.grid_layout;
  };
  if (s == "indices" || s == "quantile-table") {
    j["f"] = descriptor(c.f, c.header);
    j["g"] = descriptor(c.g, c.header);
    grid();
  } else if (s == "galton") {
    j["x"] = c.x;
    j["y"] = c.y;
    j["header"] = c.header;
  } else if (s == "test-gamma") {
    j["x"] = c.x;
    j["y"] = c.y;
    j["header"] = c.header;
    j["gamma0"] = *c.gamma0;
    j["alpha"] = c.alpha;
    j["B"] = *c.B;
    grid();
    j["seed"] = *c.seed;
  } else if (s == "simulate-table") {
    if (!c.scenario.empty()) {
      j["scenario"] = c.scenario;
    } else {
      j["cases"] = c.cases;
      j["families"] = c.families;
    }
    j["gamma0"] = c.gamma0s;
    j["n"] = c.sizes;
    j["reps"] = *c.reps;
    j["B"] = *c.B;
    j["alpha"] = c.alpha;
    grid();
    j["seed"] = *c.seed;
  } else if (s == "bridge-lab") {
    j["mode"] = c.mode;
    if (c.mode == "occupation") {
      j["paths"] = c.paths;
      j["bridge_grid"] = c.bridge_m;
      j["subset"] = c.subset;
    } else {
      j["f"] = descriptor(c.f, c.header);
      j["g"] = descriptor(c.g, c.header);
      j["delta"] = c.delta;
      j["n"] = *c.n;
      j["m"] = *c.m;
      j["reps"] = *c.reps;
      grid();
    }
    j["seed"] = *c.seed;
  } else if (s == "limit-law") {
    j["kind"] = c.kind;
    j["f"] = descriptor(c.f, c.header);
    j["g"] = descriptor(c.g, c.header);
    if (c.kind == "gamma") {
      j["n"] = *c.n;
      j["m"] = *c.m;
      j["reps"] = *c.reps;
    } else {
      j["lambda"] = c.lambda;
      j["tolerance"] = c.tolerance ? Json(*c.tolerance) : Json(nullptr);
      j["paths"] = c.paths;
      j["bridge_grid"] = c.bridge_m;
      grid();
    }
    j["seed"] = *c.seed;
  }
  return j;
}

CommandConfig config_from_json(const Json& j) {
  CommandConfig c;
  try {
    c.subcommand = j.at("subcommand").get<std::string>();
    c.x = j.value("x", "");
    c.y = j.value("y", "");
    if (j.contains("f")) c.f = spec_from_json(j.at("f"));
    if (j.contains("g")) c.g = spec_from_json(j.at("g"));
    c.header = j.value("header", false);
    if (j.contains("gamma0")) {
      if (j.at("gamma0").is_array())
        c.gamma0s = j.at("gamma0").get<std::vector<double>>();
      else
        c.gamma0 = j.at("gamma0").get<double>();
    }
    c.alpha = j.value("alpha", kDefaultAlpha);
    if (j.contains("B")) c.B = j.at("B").get<std::size_t>();
    c.grid = j.value("grid", kDefaultGridSize);
    c.grid_layout = j.value("grid_layout", "uniform");
    if (j.contains("reps")) c.reps = j.at("reps").get<std::size_t>();
    if (j.contains("seed")) c.seed = j.at("seed").get<std::uint64_t>();
    if (j.contains("cases")) c.cases = j.at("cases").get<std::vector<int>>();
    if (j.contains("families")) c.families = j.at("families").get<std::vector<std::string>>();
    if (j.contains("n")) {
      if (j.at("n").is_array())
        c.sizes = j.at("n").get<std::vector<std::size_t>>();
      else
        c.n = j.at("n").get<std::size_t>();
    }
    if (j.contains("m")) c.m = j.at("m").get<std::size_t>();
    c.scenario = j.value("scenario", "");
    c.mode = j.value("mode", "occupation");
    c.paths = j.value("paths", std::size_t{10000});
    c.bridge_m = j.value("bridge_grid", kDefaultBridgeGrid);
    c.subset = j.value("subset", "0:1");
    c.delta = j.value("delta", 0.1);
    c.kind = j.value("kind", "gamma");
    c.lambda = j.value("lambda", 0.5);
    if (j.contains("tolerance") && !j.at("tolerance").is_null()) c.tolerance = j.at("tolerance").get<double>();
  } catch (const Json::exception& e) {
    throw ParameterError(std::string("embedded config: ") + e.what());
  }
  return c;
}

int run_command(const CommandConfig& config, std::ostream& out, std::ostream& err) {
  try {
    config.validate();
    const CommandConfig c = resolved(config);
    const Output o{fs::path(c.out)};
    const auto& s = c.subcommand;
    if (s == "indices") cmd_indices(c, o, out);
    else if (s == "quantile-table") cmd_quantile_table(c, o, out);
    else if (s == "galton") cmd_galton(c, o, out);
    else if (s == "test-gamma") cmd_test_gamma(c, o, out);
    else if (s == "simulate-table") cmd_simulate_table(c, o, out);
    else if (s == "bridge-lab") cmd_bridge_lab(c, o, out);
    else cmd_limit_law(c, o, out);
    return kExitOk;
  } catch (const ParameterError& e) {
    return fail(err, kExitUsage, "usage", e.what());
  } catch (const IngestionError& e) {
    return fail(err, kExitData, "data", e.what(), e.line());
  } catch (const DomainError& e) {
    return fail(err, kExitData, "data", e.what());
  } catch (const fs::filesystem_error& e) {
    return fail(err, kExitData, "data", e.what());
  } catch (const AssumptionError& e) {
    return fail(err, kExitNumeric, "assumption", e.what());
  } catch (const std::exception& e) {
    return fail(err, kExitNumeric, "numeric", e.what());
  }
}

int rerun_report(const std::string& report_path, const std::string& out_dir, unsigned threads, std::ostream& out,
                 std::ostream& err) {
  CommandConfig c;
  try {
    const Json report = Json::parse(read_file(report_path));
    c = config_from_json(report.at("config"));
  } catch (const ParameterError& e) {
    return fail(err, kExitUsage, "usage", e.what());
  } catch (const IngestionError& e) {
    return fail(err, kExitData, "data", e.what());
  } catch (const std::exception& e) {
    return fail(err, kExitData, "data", report_path + ": " + e.what());
  }
  c.out = out_dir;
  c.threads = threads;
  return run_command(c, out, err);
}

// ---------------------------------------------------------------------------

int cli_main(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Indices of departure from stochastic dominance: estimation, tests and simulation"};
  app.set_version_flag("--version", std::string(kVersion));
  app.require_subcommand(1);

  CommandConfig c;
  std::uint64_t seed = 0;
  std::size_t B = 0, reps = 0, n = 0, m = 0;
  double gamma0 = 0.0, tolerance = 0.0;
  std::string report_path;

  struct Flags {
    CLI::Option* seed = nullptr;
    CLI::Option* B = nullptr;
    CLI::Option* reps = nullptr;
    CLI::Option* gamma0 = nullptr;
    CLI::Option* n = nullptr;
    CLI::Option* m = nullptr;
    CLI::Option* tol = nullptr;
  };
  std::map<std::string, Flags> flags;

  auto common = [&](CLI::App* sub, bool seeded) {
    sub->add_option("--out", c.out, "Output directory")->capture_default_str();
    sub->add_option("--threads", c.threads, "Worker threads (results do not depend on it)")->capture_default_str();
    if (seeded) flags[sub->get_name()].seed = sub->add_option("--seed", seed, "Master seed (else STOCHORD_SEED, else 1)");
  };
  auto models = [&](CLI::App* sub, bool required) {
    auto* fo = sub->add_option("--f", c.f, "Model for F: inline JSON, JSON file or sample CSV");
    auto* go = sub->add_option("--g", c.g, "Model for G: inline JSON, JSON file or sample CSV");
    if (required) {
      fo->required();
      go->required();
    }
    sub->add_flag("--header", c.header, "Sample CSVs have a header line");
  };
  auto samples = [&](CLI::App* sub) {
    sub->add_option("--x", c.x, "Sample from F (CSV)")->required();
    sub->add_option("--y", c.y, "Sample from G (CSV)")->required();
    sub->add_flag("--header", c.header, "Sample CSVs have a header line");
  };
  auto grid = [&](CLI::App* sub, std::size_t def) {
    c.grid = def;
    sub->add_option("--grid", c.grid, "Grid size")->capture_default_str();
    sub->add_option("--grid-layout", c.grid_layout, "uniform or rank_aligned")->capture_default_str();
  };

  auto* indices = app.add_subcommand("indices", "All dominance indices for a pair of laws or samples");
  models(indices, true);
  grid(indices, kDefaultGridSize);
  common(indices, false);

  auto* qt = app.add_subcommand("quantile-table", "Plot data: both quantile functions on a grid");
  models(qt, true);
  grid(qt, kDefaultGridSize);
  common(qt, false);

  auto* galton = app.add_subcommand("galton", "Rank-order statistic with its exact p-value");
  samples(galton);
  common(galton, false);

  auto* tg = app.add_subcommand("test-gamma", "Bootstrap test of H0: gamma >= gamma0");
  samples(tg);
  flags["test-gamma"].gamma0 = tg->add_option("--gamma0", gamma0, "Threshold")->required();
  tg->add_option("--alpha", c.alpha, "Level")->capture_default_str();
  flags["test-gamma"].B = tg->add_option("--B", B, "Bootstrap resamples (default 1000)");
  grid(tg, kDefaultGridSize);
  common(tg, true);

  auto* st = app.add_subcommand("simulate-table", "Rejection proportions for the built-in scenarios");
  st->add_option("--case", c.cases, "Cases 1-4 (default all)");
  st->add_option("--family", c.families, "t1 and/or mixture (default both)");
  st->add_option("--gamma0", c.gamma0s, "Thresholds (default .02 .05 .10 .20)");
  st->add_option("--n", c.sizes, "Sample sizes (default 100 1000)");
  st->add_option("--scenario", c.scenario, "User scenario JSON {name, f, g, nominal_gamma}");
  flags["simulate-table"].reps = st->add_option("--reps", reps, "Replicates per cell (default 200)");
  flags["simulate-table"].B = st->add_option("--B", B, "Bootstrap resamples (default 200)");
  st->add_option("--alpha", c.alpha, "Level")->capture_default_str();
  grid(st, kDefaultGridSize);
  common(st, true);

  auto* bl = app.add_subcommand("bridge-lab", "Brownian bridge occupation times and the non-consistency demo");
  bl->add_option("--mode", c.mode, "occupation or nonconsistency")->capture_default_str();
  bl->add_option("--paths", c.paths, "Bridge paths")->capture_default_str();
  bl->add_option("--bridge-grid", c.bridge_m, "Bridge grid size (power of two)")->capture_default_str();
  bl->add_option("--subset", c.subset, "Subset of [0,1] as lo:hi[,lo:hi...]")->capture_default_str();
  flags["bridge-lab"].n = bl->add_option("--n", n, "Size of the F sample (default 10000)");
  flags["bridge-lab"].m = bl->add_option("--m", m, "Size of the G sample (default n)");
  flags["bridge-lab"].reps = bl->add_option("--reps", reps, "Replicates (default 2000)");
  bl->add_option("--delta", c.delta, "Quantile shift of the built-in pair")->capture_default_str();
  models(bl, false);
  grid(bl, kDefaultGridSize);
  common(bl, true);

  auto* ll = app.add_subcommand("limit-law", "Monte Carlo of the limit laws for gamma and pi");
  ll->add_option("--kind", c.kind, "gamma or pi")->capture_default_str();
  models(ll, false);
  flags["limit-law"].n = ll->add_option("--n", n, "Size of the F sample (default 5000)");
  flags["limit-law"].m = ll->add_option("--m", m, "Size of the G sample (default n)");
  flags["limit-law"].reps = ll->add_option("--reps", reps, "Replicates (default 2000)");
  ll->add_option("--lambda", c.lambda, "Limit of n/(n+m) for the pi law")->capture_default_str();
  flags["limit-law"].tol = ll->add_option("--tolerance", tolerance, "Band defining the sup set (default 1e-3 pi)");
  ll->add_option("--paths", c.paths, "Paths for the pi law")->capture_default_str();
  ll->add_option("--bridge-grid", c.bridge_m, "Bridge grid size (power of two)")->capture_default_str();
  grid(ll, kDefaultGridSize);
  common(ll, true);

  auto* rr = app.add_subcommand("rerun", "Re-execute the configuration embedded in a report");
  rr->add_option("report", report_path, "Report JSON")->required();
  rr->add_option("--out", c.out, "Output directory")->capture_default_str();
  rr->add_option("--threads", c.threads, "Worker threads")->capture_default_str();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::CallForAllHelp& e) {
    out << app.help("", CLI::AppFormatMode::All);
    return kExitOk;
  } catch (const CLI::CallForVersion& e) {
    out << kVersion << "\n";
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    return fail(err, kExitUsage, "usage", e.what());
  }

  if (rr->parsed()) return rerun_report(report_path, c.out, c.threads, out, err);

  for (auto* sub : app.get_subcommands()) {
    c.subcommand = sub->get_name();
    const auto it = flags.find(c.subcommand);
    if (it == flags.end()) break;
    const auto& fl = it->second;
    if (fl.seed && fl.seed->count()) c.seed = seed;
    if (fl.B && fl.B->count()) c.B = B;
    if (fl.reps && fl.reps->count()) c.reps = reps;
    if (fl.gamma0 && fl.gamma0->count()) c.gamma0 = gamma0;
    if (fl.n && fl.n->count()) c.n = n;
    if (fl.m && fl.m->count()) c.m = m;
    if (fl.tol && fl.tol->count()) c.tolerance = tolerance;
  }
  return run_command(c, out, err);
}

}  // namespace stochord
