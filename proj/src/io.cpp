#include "stochord/io.hpp"

#include <unistd.h>

#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <sstream>

#include "stochord/errors.hpp"

namespace stochord {

namespace fs = std::filesystem;

namespace {

std::string_view trim(std::string_view s) {
  const auto is_space = [](char c) { return c == ' ' || c == '\t' || c == '\r' || c == '\n'; };
  while (!s.empty() && is_space(s.front())) s.remove_prefix(1);
  while (!s.empty() && is_space(s.back())) s.remove_suffix(1);
  return s;
}

}  // namespace

std::vector<double> parse_sample_csv(std::string_view text, bool header, const std::string& source) {
  // tolerate a UTF-8 byte order mark
  if (text.starts_with("\xEF\xBB\xBF")) text.remove_prefix(3);
  std::vector<double> out;
  long line_no = 0;
  std::size_t pos = 0;
  while (pos < text.size()) {
    auto end = text.find('\n', pos);
    if (end == std::string_view::npos) end = text.size();
    const auto raw = text.substr(pos, end - pos);
    pos = end + 1;
    ++line_no;
    if (header && line_no == 1) continue;
    const auto field = trim(raw);
    if (field.empty()) {
      // a single trailing newline is not a blank row
      if (pos >= text.size() && raw.empty()) break;
      throw IngestionError(source + ": blank row at line " + std::to_string(line_no), line_no);
    }
    double v = 0.0;
    const char* first = field.data();
    if (*first == '+') ++first;
    const auto res = std::from_chars(first, field.data() + field.size(), v);
    if (res.ec != std::errc() || res.ptr != field.data() + field.size())
      throw IngestionError(source + ": non-numeric value '" + std::string(field) + "' at line " +
                               std::to_string(line_no),
                           line_no);
    if (!std::isfinite(v))
      throw IngestionError(source + ": non-finite value at line " + std::to_string(line_no), line_no);
    out.push_back(v);
  }
  if (out.empty()) throw IngestionError(source + ": no numeric rows");
  return out;
}

std::string read_file(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IngestionError("cannot open '" + path.string() + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::vector<double> load_sample_csv(const fs::path& path, bool header) {
  if (!fs::exists(path)) throw IngestionError("file not found: '" + path.string() + "'");
  return parse_sample_csv(read_file(path), header, path.string());
}

std::string format_double(double v) {
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  // shortest text that parses back to the same double (at most 17 digits)
  char buf[32];
  const auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

std::string sample_csv(std::span<const double> values, std::string_view header) {
  std::string out;
  if (!header.empty()) (out += header) += '\n';
  for (double v : values) (out += format_double(v)) += '\n';
  return out;
}

void write_file_atomic(const fs::path& path, std::string_view content) {
  if (path.has_parent_path()) fs::create_directories(path.parent_path());
  fs::path tmp = path;
  tmp += ".tmp." + std::to_string(::getpid());
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw std::runtime_error("cannot write '" + tmp.string() + "'");
    out.write(content.data(), static_cast<std::streamsize>(content.size()));
    out.flush();
    if (!out) {
      out.close();
      fs::remove(tmp);
      throw std::runtime_error("write failed for '" + path.string() + "'");
    }
  }
  fs::rename(tmp, path);
}

// ---------------------------------------------------------------------------
// models

namespace {

double number(const Json& j, const char* key) {
  if (!j.contains(key) || !j.at(key).is_number())
    throw ParameterError(std::string("model descriptor needs numeric field '") + key + "'");
  return j.at(key).get<double>();
}

}  // namespace

DistributionModel parse_model(const Json& d, const fs::path& base_dir) {
  if (!d.is_object() || !d.contains("kind") || !d.at("kind").is_string())
    throw ParameterError("model descriptor must be an object with a string 'kind'");
  const auto kind = d.at("kind").get<std::string>();
  if (kind == "normal") return DistributionModel::normal(number(d, "mean"), number(d, "sd"));
  if (kind == "t1") return DistributionModel::noncentral_t1(number(d, "ncp"));
  if (kind == "uniform") return DistributionModel::uniform(number(d, "lo"), number(d, "hi"));
  if (kind == "mixture") {
    if (!d.contains("components") || !d.at("components").is_array())
      throw ParameterError("mixture descriptor needs a 'components' array");
    std::vector<MixtureComponent> comps;
    for (const auto& c : d.at("components")) {
      const double w = c.contains("w") ? number(c, "w") : number(c, "weight");
      comps.push_back({w, number(c, "mean"), number(c, "sd")});
    }
    return DistributionModel::mixture(std::move(comps));
  }
  if (kind == "pwlq") {
    if (!d.contains("segments") || !d.at("segments").is_array())
      throw ParameterError("pwlq descriptor needs a 'segments' array");
    std::vector<QuantileSegment> segs;
    for (const auto& s : d.at("segments")) {
      if (!s.is_array() || s.size() != 4) throw ParameterError("pwlq segments are [t_lo, t_hi, x_lo, x_hi]");
      segs.push_back({s[0].get<double>(), s[1].get<double>(), s[2].get<double>(), s[3].get<double>()});
    }
    return DistributionModel::piecewise_linear_quantile(std::move(segs));
  }
  if (kind == "empirical") {
    if (d.contains("values") && d.at("values").is_array())
      return DistributionModel::empirical(d.at("values").get<std::vector<double>>());
    if (!d.contains("csv") || !d.at("csv").is_string())
      throw ParameterError("empirical descriptor needs 'csv' (a path) or 'values'");
    fs::path p = d.at("csv").get<std::string>();
    if (p.is_relative() && !base_dir.empty()) p = base_dir / p;
    const bool header = d.value("header", false);
    return DistributionModel::empirical(load_sample_csv(p, header));
  }
  throw ParameterError("unknown model kind '" + kind + "'");
}

Json load_model_descriptor(const std::string& spec, bool header) {
  const auto first = trim(spec);
  if (!first.empty() && first.front() == '{') {
    try {
      return Json::parse(spec);
    } catch (const Json::parse_error& e) {
      throw ParameterError(std::string("inline model JSON: ") + e.what());
    }
  }
  const fs::path p = spec;
  if (!fs::exists(p)) throw IngestionError("model file not found: '" + spec + "'");
  if (p.extension() == ".json") {
    Json d;
    try {
      d = Json::parse(read_file(p));
    } catch (const Json::parse_error& e) {
      throw IngestionError(spec + ": " + e.what());
    }
    // relative csv paths inside a descriptor are resolved against its directory
    if (d.is_object() && d.value("kind", "") == "empirical" && d.contains("csv")) {
      fs::path csv = d.at("csv").get<std::string>();
      if (csv.is_relative()) d["csv"] = (p.parent_path() / csv).lexically_normal().string();
    }
    return d;
  }
  Json d{{"kind", "empirical"}, {"csv", spec}};
  if (header) d["header"] = true;
  return d;
}

// ---------------------------------------------------------------------------
// reports

namespace {
Json optional_number(const std::optional<double>& v) { return v ? Json(*v) : Json(nullptr); }
}  // namespace

Json to_json(const SeedSpec& seed) { return Json{{"seed", seed.seed}, {"stream", seed.stream}}; }

Json to_json(const GridSpec& grid) {
  return Json{{"size", grid.size},
              {"layout", grid.layout == GridSpec::Layout::uniform ? "uniform" : "rank_aligned"}};
}

Json to_json(const IndexReport& r) {
  return Json{{"gamma", r.gamma},
              {"rho", r.rho},
              {"pi", r.pi},
              {"upsilon", r.upsilon()},
              {"vartheta", r.vartheta},
              {"epsilon", optional_number(r.epsilon)},
              {"epsilon_defined", r.epsilon.has_value()},
              {"reversed", {{"gamma", r.gamma_reversed}, {"rho", r.rho_reversed}, {"pi", r.pi_reversed}}},
              {"grid_size", r.grid_size},
              {"tie_flag", r.tie_flag}};
}

Json to_json(const GaltonResult& r) {
  return Json{{"count", r.count}, {"n", r.n}, {"p_value", r.p_value}, {"tie_flag", r.tie_flag}};
}

Json to_json(const TestResult& r) {
  return Json{{"estimate", r.estimate},
              {"bootstrap_sd", r.bootstrap_sd},
              {"U", r.bound_u},
              {"V", r.bound_v},
              {"alpha", r.alpha},
              {"gamma0", r.gamma0},
              {"reject", r.reject},
              {"degenerate", r.degenerate},
              {"B", r.B},
              {"n", r.n},
              {"m", r.m},
              {"grid", to_json(r.grid)},
              {"seed", to_json(r.seed)}};
}

Json to_json(const ExperimentResult& r) {
  return Json{{"scenario", r.scenario},   {"gamma0", r.gamma0},         {"n", r.n},
              {"reps", r.reps},           {"B", r.B},                   {"alpha", r.alpha},
              {"grid_size", r.grid_size}, {"rejections", r.rejections}, {"proportion", r.proportion},
              {"mc_se", r.mc_se},         {"seed", to_json(r.seed)}};
}

Json to_json(const CrossingSpec& c) {
  Json pts = Json::array();
  for (const auto& p : c.points) pts.push_back({{"t", p.t}, {"x", p.x}, {"f", p.f}, {"g", p.g}});
  return Json{{"lambda", c.lambda}, {"points", pts}};
}

Json to_json(const NonconsistencySummary& s) {
  return Json{{"n", s.n},
              {"m", s.m},
              {"reps", s.reps},
              {"gamma", s.gamma},
              {"coincidence_measure", s.coincidence_measure},
              {"reference_mean", s.coincidence_measure / 2.0},
              {"mean", s.mean},
              {"sd", s.sd},
              {"mc_se", s.mc_se},
              {"degenerate", s.degenerate}};
}

// ---------------------------------------------------------------------------
// tables

namespace {

double endpoint_quantile(const DistributionModel& model, bool upper) {
  const double inf = std::numeric_limits<double>::infinity();
  if (model.is_empirical()) {
    const auto v = model.as_empirical().values();
    return upper ? v.back() : v.front();
  }
  if (const auto* p = std::get_if<PiecewiseLinearQuantileLaw>(&model.law()))
    return upper ? p->segments.back().x_hi : p->segments.front().x_lo;
  return upper ? inf : -inf;
}

}  // namespace

std::string quantile_table_csv(const DistributionModel& f, const DistributionModel& g, const GridSpec& grid) {
  std::string out = "t,F_quantile,G_quantile,indicator\n";
  const auto ts = grid.interior_points();
  const auto qf = quantiles_on_grid(f, grid);
  const auto qg = quantiles_on_grid(g, grid);
  auto row = [&](double t, double a, double b, bool ind) {
    out += format_double(t) + ',' + format_double(a) + ',' + format_double(b) + ',' + (ind ? "1" : "0") + '\n';
  };
  const bool closed = grid.layout == GridSpec::Layout::uniform;
  if (closed) row(0.0, endpoint_quantile(f, false), endpoint_quantile(g, false), false);
  for (std::size_t j = 0; j < ts.size(); ++j) row(ts[j], qf[j], qg[j], qf[j] > qg[j]);
  if (closed) row(1.0, endpoint_quantile(f, true), endpoint_quantile(g, true), false);
  return out;
}

void emit_quantile_table(const DistributionModel& f, const DistributionModel& g, const GridSpec& grid,
                         const fs::path& path) {
  write_file_atomic(path, quantile_table_csv(f, g, grid));
}

std::string histogram_csv(const std::vector<HistogramBin>& bins) {
  std::string out = "bin,lo,hi,count,frequency\n";
  for (std::size_t b = 0; b < bins.size(); ++b)
    out += std::to_string(b) + ',' + format_double(bins[b].lo) + ',' + format_double(bins[b].hi) + ',' +
           std::to_string(bins[b].count) + ',' + format_double(bins[b].frequency) + '\n';
  return out;
}

std::string config_hash(const Json& config) {
  std::uint64_t h = 0xcbf29ce484222325ull;
  for (unsigned char c : config.dump()) h = (h ^ c) * 0x100000001b3ull;
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

}  // namespace stochord
