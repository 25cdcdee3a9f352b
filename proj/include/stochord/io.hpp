#pragma once

#include <cstdint>
#include <filesystem>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "stochord/bridge.hpp"
#include "stochord/distributions.hpp"
#include "stochord/indices.hpp"
#include "stochord/inference.hpp"
#include "stochord/simharness.hpp"

namespace stochord {

inline constexpr std::string_view kVersion = "1.0.0";

using Json = nlohmann::ordered_json;

/// One numeric value per line; blank lines and non-numeric rows are errors
/// citing the 1-based line. With `header` the first line is skipped.
std::vector<double> parse_sample_csv(std::string_view text, bool header, const std::string& source = "input");
/// Throws IngestionError for a missing, unreadable or empty file.
std::vector<double> load_sample_csv(const std::filesystem::path& path, bool header = false);

/// Shortest round-trip decimal (at most 17 significant digits): parsing the
/// text gives back the same double.
std::string format_double(double v);
std::string sample_csv(std::span<const double> values, std::string_view header = {});

/// Writes to a temporary file in the same directory and renames it over
/// `path`, so readers never see a partial file.
void write_file_atomic(const std::filesystem::path& path, std::string_view content);
std::string read_file(const std::filesystem::path& path);

/// Model descriptors:
///   {"kind":"normal","mean":m,"sd":s}
///   {"kind":"t1","ncp":d}
///   {"kind":"mixture","components":[{"w":w,"mean":m,"sd":s},...]}
///   {"kind":"empirical","csv":"path"[,"header":true]}  (relative to base_dir)
///   {"kind":"uniform","lo":a,"hi":b}
///   {"kind":"pwlq","segments":[[t_lo,t_hi,x_lo,x_hi],...]}
DistributionModel parse_model(const Json& descriptor, const std::filesystem::path& base_dir = {});
/// `spec` is inline JSON, a path to a JSON descriptor, or a path to a sample CSV.
Json load_model_descriptor(const std::string& spec, bool header = false);

Json to_json(const SeedSpec& seed);
Json to_json(const GridSpec& grid);
Json to_json(const IndexReport& report);
Json to_json(const GaltonResult& result);
Json to_json(const TestResult& result);
Json to_json(const ExperimentResult& result);
Json to_json(const CrossingSpec& cross);
Json to_json(const NonconsistencySummary& summary);

/// CSV t, F_quantile, G_quantile, indicator with one row per grid level
/// (endpoints included for the uniform layout; they never count as violations).
std::string quantile_table_csv(const DistributionModel& f, const DistributionModel& g, const GridSpec& grid);
void emit_quantile_table(const DistributionModel& f, const DistributionModel& g, const GridSpec& grid,
                         const std::filesystem::path& path);

std::string histogram_csv(const std::vector<HistogramBin>& bins);

/// FNV-1a of the compact serialization, as 16 hex digits.
std::string config_hash(const Json& config);

}  // namespace stochord
