/* Copyright 2026 The sca-eval Authors

Licensed under the Apache License, Version 2.0 (the "License");
you may not use this file except in compliance with the License.
You may obtain a copy of the License at

    http://www.apache.org/licenses/LICENSE-2.0

Unless required by applicable law or agreed to in writing, software
distributed under the License is distributed on an "AS IS" BASIS,
WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
See the License for the specific language governing permissions and
limitations under the License.
==============================================================================*/

#ifndef SCAEVAL_REPORT_HPP_
#define SCAEVAL_REPORT_HPP_

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <variant>
#include <vector>

#include "scaeval/frechet.hpp"
#include "scaeval/mask_metrics.hpp"
#include "scaeval/projection.hpp"
#include "scaeval/review.hpp"
#include "scaeval/track_metrics.hpp"

namespace scaeval {

using Cell = std::variant<std::int64_t, double, std::string>;

struct MetricTable {
  std::vector<std::string> columns;
  std::vector<std::vector<Cell>> rows;

  friend bool operator==(const MetricTable&, const MetricTable&) = default;
};

struct MetricEntry {
  // Conventions needed to interpret the values: sign convention,
  // normalization axis, window, tolerance, resampler, ...
  std::map<std::string, std::string> metadata;
  MetricTable table;

  friend bool operator==(const MetricEntry&, const MetricEntry&) = default;
};

struct MetricReport {
  std::string model_name;
  std::map<std::string, MetricEntry> entries;  // metric id -> entry
  std::map<std::string, std::string> provenance;  // input path -> sha256

  // "<entry>.<column>" on a single-row table, or "<entry>" when the table
  // has a single row with a "value" column.
  std::optional<double> Scalar(const std::string& metric_id) const;

  // Inserts or replaces entries; provenance is merged.
  void Merge(const MetricReport& other);

  friend bool operator==(const MetricReport&, const MetricReport&) = default;
};

// Lowercase hex SHA-256 of a file's bytes. Throws kIoError.
std::string Sha256File(const std::filesystem::path& path);

// ---------------------------------------------------------------------------
// Weighted composite score.

struct MetricWeight {
  double weight = 0.0;  // >= 0
  double offset = 0.0;
  double scale = 1.0;   // > 0
  // For higher-is-better metrics: normalized = 1 - clamp((raw - offset) / scale).
  bool invert = false;
};

struct WeightSpec {
  std::map<std::string, MetricWeight> metrics;
};

// {"metrics": {"<id>": {"weight": w, "offset": o, "scale": s, "invert": false}}}
WeightSpec ParseWeightSpec(std::string_view json);
WeightSpec LoadWeightSpec(const std::filesystem::path& path);

// Throws kInvalidArgument for a spec with no positive weight or a
// non-positive scale.
void ValidateWeightSpec(const WeightSpec& spec);

// clamp((raw - offset) / scale, 0, 1), inverted when requested; lower is
// better.
double NormalizeMetric(double raw, const MetricWeight& w);

// Sum of weight * normalized value over positively weighted metrics. Throws
// kMissingMetric naming the first absent metric.
double CompositeScore(const MetricReport& report, const WeightSpec& spec);

// ---------------------------------------------------------------------------
// Emission.

enum class ReportFormat { kCsv, kJson };

// From the extension: ".json" selects JSON, anything else CSV.
ReportFormat FormatForPath(const std::filesystem::path& path);

// CSV layout (comma separated, '\n' line ends, '.' decimal point):
//   # sca-eval report v1
//   # model,<name>
//   # input,<path>,<sha256>              (one per input)
//   then per entry, separated by a blank line:
//   # entry,<metric id>
//   # meta,<key>,<value>                 (one per metadata key)
//   <header row>
//   <data rows>
// Cell types are recovered from the text: integers are bare digits, doubles
// always carry a '.', an exponent, inf or nan (shortest round-trip form),
// and strings that would read as anything else are double-quoted.
void WriteCsvReport(const MetricReport& report, std::ostream& out);
MetricReport ParseCsvReport(std::istream& in);

void WriteJsonReport(const MetricReport& report, std::ostream& out);
MetricReport ParseJsonReport(std::istream& in);

// Throws kIoError when the file cannot be written.
void EmitReport(const MetricReport& report, ReportFormat format,
                const std::filesystem::path& path);
MetricReport LoadReport(const std::filesystem::path& path);

std::string FormatDouble(double value);

// ---------------------------------------------------------------------------
// Entry builders. Each records the conventions it depends on.

MetricEntry DisplacementEntry(std::span<const DisplacementStats> rows);
MetricEntry DurationEntry(const DurationStats& stats, int tolerance_frames);
MetricEntry PresenceEntry(const PresenceCurve& curve);
MetricEntry CentroidEntry(const CentroidDistStats& stats);
MetricEntry CentroidHistogramEntry(const CentroidDistStats& stats);
MetricEntry MaskDiffEntry(std::span<const MaskDiffRow> rows);
MetricEntry FrechetEntry(const FrechetResult& result, const std::string& kind);
MetricEntry ProjectionEntry(std::span<const ProjectedAnnotation> boxes,
                            const VisibilityOptions& options);
MetricEntry PreferenceEntry(const PreferenceStats& stats, const std::string& model_a,
                            const std::string& model_b);
MetricEntry ComplianceEntry(const ComplianceStats& stats, const std::string& scenario);

}  // namespace scaeval

#endif  // SCAEVAL_REPORT_HPP_
