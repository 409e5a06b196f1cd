#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "pocsel/csv.hpp"
#include "pocsel/inference.hpp"
#include "pocsel/moments.hpp"

namespace pocsel {

inline constexpr int kSchemaVersion = 1;

std::string_view tool_version() noexcept;

enum class OutputFormat { Json, Text };

struct RunConfig {
  std::string input_path;
  ColumnMapping columns;
  std::vector<AssumptionSet> assumption_sets{kAllAssumptionSets.begin(), kAllAssumptionSets.end()};
  std::size_t reps = 1000;
  double level = 0.9;
  std::uint64_t seed = 1;
  /// Empty means "on exactly when a stratum column is mapped".
  std::optional<bool> stratified;
  OutputFormat format = OutputFormat::Json;
  std::optional<std::string> plot_out;
  unsigned threads = 0;

  /// Throws ConfigError.
  void validate() const;
  bool use_strata() const { return stratified.value_or(columns.stratum.has_value()); }
};

struct SetResult {
  BoundsInterval bounds;
  Interval ci_lb;
  Interval ci_ub;
  std::size_t failed_replicates = 0;
  RestrictionTestResult tests;

  bool operator==(const SetResult&) const = default;
};

struct StratumRow {
  std::string stratum;
  ObservedMoments moments;
  BoundsInterval bounds;
  std::optional<Interval> ci_lb;  // empty when the stratum is too sparse to bootstrap
  std::optional<Interval> ci_ub;
  double weight = 0.0;
  std::size_t n = 0;

  bool operator==(const StratumRow&) const = default;
};

struct StratifiedSection {
  BoundsInterval aggregate;
  Interval ci_lb;
  Interval ci_ub;
  std::size_t failed_replicates = 0;
  std::vector<StratumRow> rows;
  std::vector<std::pair<std::string, std::string>> dropped;

  bool operator==(const StratifiedSection&) const = default;
};

struct Provenance {
  std::string tool_version;
  std::string input_digest;  // sha256 of the input bytes, hex
  std::uint64_t seed = 0;
  std::size_t reps = 0;
  double level = 0.0;
  bool stratified = false;
  ColumnMapping columns;

  bool operator==(const Provenance&) const = default;
};

struct Report {
  int schema_version = kSchemaVersion;
  std::size_t n = 0;
  ObservedMoments moments;
  std::vector<AssumptionSet> assumption_sets;
  std::vector<SetResult> unconditional;  // parallel to assumption_sets
  std::vector<StratifiedSection> stratified;  // parallel to assumption_sets, or empty
  std::vector<std::string> warnings;
  Provenance provenance;

  bool operator==(const Report&) const = default;
};

std::string sha256_hex(std::string_view bytes);

/// Runs the full pipeline on an in-memory dataset.
Report analyze(const Dataset& data, const RunConfig& cfg, std::string input_digest);

/// Loads cfg.input_path and runs analyze(). Errors keep their module tag.
Report run_analysis(const RunConfig& cfg);

std::string to_json(const Report& report);
Report report_from_json(const std::string& text);
std::string to_text(const Report& report);

/// Writes the bar chart to `svg_path` and the plotted numbers to the sidecar
/// returned by plot_sidecar_path().
void emit_plot_data(const Report& report, const std::string& svg_path);
std::string plot_sidecar_path(const std::string& svg_path);

/// The SVG and sidecar JSON as strings.
std::string render_svg(const Report& report);
std::string plot_json(const Report& report);

}  // namespace pocsel
