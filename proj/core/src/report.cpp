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

#include "scaeval/report.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <fstream>
#include <istream>
#include <iterator>
#include <ostream>
#include <sstream>

#include <fmt/format.h>
#include <nlohmann/json.hpp>
#include <openssl/evp.h>

#include "scaeval/error.hpp"
#include "text_util.hpp"

namespace scaeval {

namespace {

using json = nlohmann::json;

constexpr std::string_view kCsvMagic = "# sca-eval report v1";
constexpr std::string_view kJsonMagic = "sca-eval report v1";

std::optional<std::int64_t> AsInt(std::string_view s) { return internal::ToInt<std::int64_t>(s); }

std::optional<double> AsDouble(std::string_view s) {
  if (s.empty()) return std::nullopt;
  double v = 0.0;
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || ptr != s.data() + s.size()) return std::nullopt;
  return v;
}

bool NeedsQuotes(std::string_view s) {
  if (s.empty() || s.front() == '#') return true;
  if (s.find_first_of(",\"\n\r") != std::string_view::npos) return true;
  return AsInt(s).has_value() || AsDouble(s).has_value();
}

std::string QuoteField(std::string_view s) {
  if (!NeedsQuotes(s)) return std::string(s);
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  out += '"';
  return out;
}

std::string CellText(const Cell& cell) {
  if (const auto* i = std::get_if<std::int64_t>(&cell)) return std::to_string(*i);
  if (const auto* d = std::get_if<double>(&cell)) return FormatDouble(*d);
  return QuoteField(std::get<std::string>(cell));
}

struct Field {
  std::string text;
  bool quoted = false;
};

using Record = std::vector<Field>;

// Splits the stream into records; newlines inside quotes stay in the field.
std::vector<Record> ReadRecords(std::istream& in) {
  const std::string data{std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
  std::vector<Record> records;
  Record rec;
  Field field;
  bool in_quotes = false;
  bool any = false;
  for (std::size_t i = 0; i < data.size(); ++i) {
    const char c = data[i];
    any = true;
    if (in_quotes) {
      if (c == '"') {
        if (i + 1 < data.size() && data[i + 1] == '"') {
          field.text += '"';
          ++i;
        } else {
          in_quotes = false;
        }
      } else {
        field.text += c;
      }
    } else if (c == '"' && field.text.empty() && !field.quoted) {
      in_quotes = true;
      field.quoted = true;
    } else if (c == ',') {
      rec.push_back(std::move(field));
      field = {};
    } else if (c == '\n') {
      rec.push_back(std::move(field));
      records.push_back(std::move(rec));
      rec = {};
      field = {};
      any = false;
    } else {
      field.text += c;
    }
  }
  if (in_quotes) throw Error(ErrorCode::kMalformedRecord, "unterminated quoted field");
  if (any) {
    rec.push_back(std::move(field));
    records.push_back(std::move(rec));
  }
  return records;
}

Cell ParseCell(const Field& f) {
  if (f.quoted) return f.text;
  if (auto i = AsInt(f.text)) return *i;
  if (auto d = AsDouble(f.text)) return *d;
  return f.text;
}

bool IsBlank(const Record& r) { return r.size() == 1 && !r[0].quoted && r[0].text.empty(); }

bool IsDirective(const Record& r, std::string_view name) {
  return !r.empty() && !r[0].quoted && r[0].text == name;
}

json CellToJson(const Cell& c) {
  return std::visit([](const auto& v) { return json(v); }, c);
}

Cell CellFromJson(const json& j) {
  if (j.is_number_integer()) return j.get<std::int64_t>();
  if (j.is_number_float()) return j.get<double>();
  if (j.is_string()) return j.get<std::string>();
  if (j.is_null()) return std::numeric_limits<double>::quiet_NaN();
  throw Error(ErrorCode::kMalformedRecord, "unsupported cell " + j.dump());
}

Cell OptionalCell(const std::optional<double>& v) {
  if (v) return *v;
  return std::string();
}

}  // namespace

std::string FormatDouble(double value) {
  if (std::isnan(value)) return "nan";
  if (std::isinf(value)) return value > 0 ? "inf" : "-inf";
  std::string s = internal::ShortestDouble(value);
  if (s.find_first_of(".e") == std::string::npos) s += ".0";
  return s;
}

std::optional<double> MetricReport::Scalar(const std::string& metric_id) const {
  std::string entry_id = metric_id;
  std::string column = "value";
  auto it = entries.find(entry_id);
  if (it == entries.end()) {
    const std::size_t dot = metric_id.rfind('.');
    if (dot == std::string::npos) return std::nullopt;
    entry_id = metric_id.substr(0, dot);
    column = metric_id.substr(dot + 1);
    it = entries.find(entry_id);
    if (it == entries.end()) return std::nullopt;
  }
  const MetricTable& t = it->second.table;
  if (t.rows.size() != 1) return std::nullopt;
  const auto col = std::find(t.columns.begin(), t.columns.end(), column);
  if (col == t.columns.end()) return std::nullopt;
  const Cell& cell = t.rows[0][static_cast<std::size_t>(col - t.columns.begin())];
  if (const auto* i = std::get_if<std::int64_t>(&cell)) return static_cast<double>(*i);
  if (const auto* d = std::get_if<double>(&cell)) return *d;
  return std::nullopt;
}

void MetricReport::Merge(const MetricReport& other) {
  if (model_name.empty()) model_name = other.model_name;
  for (const auto& [id, e] : other.entries) entries[id] = e;
  for (const auto& [p, d] : other.provenance) provenance[p] = d;
}

std::string Sha256File(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::kIoError, "cannot read " + path.string());
  std::unique_ptr<EVP_MD_CTX, decltype(&EVP_MD_CTX_free)> ctx(EVP_MD_CTX_new(), EVP_MD_CTX_free);
  if (!ctx || EVP_DigestInit_ex(ctx.get(), EVP_sha256(), nullptr) != 1) {
    throw Error(ErrorCode::kIoError, "SHA-256 unavailable");
  }
  std::array<char, 1 << 16> buf{};
  while (in) {
    in.read(buf.data(), buf.size());
    if (in.gcount() > 0) EVP_DigestUpdate(ctx.get(), buf.data(), static_cast<std::size_t>(in.gcount()));
  }
  if (in.bad()) throw Error(ErrorCode::kIoError, "read error on " + path.string());
  unsigned char md[EVP_MAX_MD_SIZE];
  unsigned int len = 0;
  EVP_DigestFinal_ex(ctx.get(), md, &len);
  std::string hex;
  for (unsigned int i = 0; i < len; ++i) hex += fmt::format("{:02x}", md[i]);
  return hex;
}

// ---------------------------------------------------------------------------

WeightSpec ParseWeightSpec(std::string_view text) {
  WeightSpec spec;
  try {
    const json j = json::parse(text);
    for (const auto& [id, m] : j.at("metrics").items()) {
      MetricWeight w;
      w.weight = m.at("weight").get<double>();
      w.offset = m.value("offset", 0.0);
      w.scale = m.value("scale", 1.0);
      w.invert = m.value("invert", false);
      spec.metrics[id] = w;
    }
  } catch (const json::exception& e) {
    throw Error(ErrorCode::kMalformedRecord, std::string("weight spec: ") + e.what());
  }
  ValidateWeightSpec(spec);
  return spec;
}

WeightSpec LoadWeightSpec(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::kIoError, "cannot read " + path.string());
  const std::string text{std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
  return ParseWeightSpec(text);
}

void ValidateWeightSpec(const WeightSpec& spec) {
  bool positive = false;
  for (const auto& [id, w] : spec.metrics) {
    if (!(w.weight >= 0.0) || !std::isfinite(w.weight)) {
      throw Error(ErrorCode::kInvalidArgument, "weight of " + id + " must be non-negative");
    }
    if (!(w.scale > 0.0) || !std::isfinite(w.scale)) {
      throw Error(ErrorCode::kInvalidArgument, "scale of " + id + " must be positive");
    }
    if (!std::isfinite(w.offset)) {
      throw Error(ErrorCode::kInvalidArgument, "offset of " + id + " must be finite");
    }
    positive = positive || w.weight > 0.0;
  }
  if (!positive) throw Error(ErrorCode::kInvalidArgument, "weight spec has no positive weight");
}

double NormalizeMetric(double raw, const MetricWeight& w) {
  const double n = std::clamp((raw - w.offset) / w.scale, 0.0, 1.0);
  return w.invert ? 1.0 - n : n;
}

double CompositeScore(const MetricReport& report, const WeightSpec& spec) {
  ValidateWeightSpec(spec);
  double score = 0.0;
  for (const auto& [id, w] : spec.metrics) {
    if (w.weight == 0.0) continue;
    const auto raw = report.Scalar(id);
    if (!raw) throw Error(ErrorCode::kMissingMetric, "metric " + id + " not in report");
    score += w.weight * NormalizeMetric(*raw, w);
  }
  return score;
}

// ---------------------------------------------------------------------------

ReportFormat FormatForPath(const std::filesystem::path& path) {
  return path.extension() == ".json" ? ReportFormat::kJson : ReportFormat::kCsv;
}

void WriteCsvReport(const MetricReport& report, std::ostream& out) {
  out << kCsvMagic << '\n';
  out << "# model," << QuoteField(report.model_name) << '\n';
  for (const auto& [p, digest] : report.provenance) {
    out << "# input," << QuoteField(p) << ',' << QuoteField(digest) << '\n';
  }
  for (const auto& [id, e] : report.entries) {
    out << '\n' << "# entry," << QuoteField(id) << '\n';
    for (const auto& [k, v] : e.metadata) {
      out << "# meta," << QuoteField(k) << ',' << QuoteField(v) << '\n';
    }
    for (std::size_t c = 0; c < e.table.columns.size(); ++c) {
      out << (c ? "," : "") << QuoteField(e.table.columns[c]);
    }
    out << '\n';
    for (const auto& row : e.table.rows) {
      for (std::size_t c = 0; c < row.size(); ++c) out << (c ? "," : "") << CellText(row[c]);
      out << '\n';
    }
  }
}

MetricReport ParseCsvReport(std::istream& in) {
  const auto records = ReadRecords(in);
  if (records.empty() || records[0].size() != 1 || records[0][0].text != kCsvMagic) {
    throw Error(ErrorCode::kMalformedRecord, "not an sca-eval CSV report");
  }
  MetricReport report;
  std::size_t i = 1;
  auto bad = [&](const std::string& why) {
    throw Error(ErrorCode::kMalformedRecord, "report record " + std::to_string(i + 1) + ": " + why);
  };
  if (i >= records.size() || !IsDirective(records[i], "# model") || records[i].size() != 2) {
    bad("expected '# model'");
  }
  report.model_name = records[i++][1].text;
  while (i < records.size() && IsDirective(records[i], "# input")) {
    if (records[i].size() != 3) bad("bad '# input'");
    report.provenance[records[i][1].text] = records[i][2].text;
    ++i;
  }
  while (i < records.size()) {
    if (IsBlank(records[i])) {
      ++i;
      continue;
    }
    if (!IsDirective(records[i], "# entry") || records[i].size() != 2) bad("expected '# entry'");
    const std::string id = records[i++][1].text;
    if (report.entries.contains(id)) bad("duplicate entry " + id);
    MetricEntry entry;
    while (i < records.size() && IsDirective(records[i], "# meta")) {
      if (records[i].size() != 3) bad("bad '# meta'");
      entry.metadata[records[i][1].text] = records[i][2].text;
      ++i;
    }
    if (i >= records.size() || IsBlank(records[i])) bad("entry " + id + " has no header");
    for (const Field& f : records[i]) entry.table.columns.push_back(f.text);
    ++i;
    while (i < records.size() && !IsBlank(records[i])) {
      if (records[i].size() != entry.table.columns.size()) bad("row width differs from header");
      std::vector<Cell> row;
      for (const Field& f : records[i]) row.push_back(ParseCell(f));
      entry.table.rows.push_back(std::move(row));
      ++i;
    }
    report.entries.emplace(id, std::move(entry));
  }
  return report;
}

void WriteJsonReport(const MetricReport& report, std::ostream& out) {
  json entries = json::object();
  for (const auto& [id, e] : report.entries) {
    json rows = json::array();
    for (const auto& row : e.table.rows) {
      json r = json::array();
      for (const Cell& c : row) r.push_back(CellToJson(c));
      rows.push_back(std::move(r));
    }
    entries[id] = {{"metadata", e.metadata}, {"columns", e.table.columns}, {"rows", rows}};
  }
  const json j = {{"format", kJsonMagic},
                  {"model", report.model_name},
                  {"provenance", report.provenance},
                  {"entries", entries}};
  out << j.dump(2) << '\n';
}

MetricReport ParseJsonReport(std::istream& in) {
  MetricReport report;
  try {
    const json j = json::parse(in);
    if (j.at("format").get<std::string>() != kJsonMagic) {
      throw Error(ErrorCode::kMalformedRecord, "not an sca-eval JSON report");
    }
    report.model_name = j.at("model").get<std::string>();
    report.provenance = j.at("provenance").get<std::map<std::string, std::string>>();
    for (const auto& [id, e] : j.at("entries").items()) {
      MetricEntry entry;
      entry.metadata = e.at("metadata").get<std::map<std::string, std::string>>();
      entry.table.columns = e.at("columns").get<std::vector<std::string>>();
      for (const json& r : e.at("rows")) {
        std::vector<Cell> row;
        for (const json& c : r) row.push_back(CellFromJson(c));
        if (row.size() != entry.table.columns.size()) {
          throw Error(ErrorCode::kMalformedRecord, "entry " + id + ": row width differs");
        }
        entry.table.rows.push_back(std::move(row));
      }
      report.entries.emplace(id, std::move(entry));
    }
  } catch (const json::exception& e) {
    throw Error(ErrorCode::kMalformedRecord, std::string("JSON report: ") + e.what());
  }
  return report;
}

void EmitReport(const MetricReport& report, ReportFormat format,
                const std::filesystem::path& path) {
  std::ostringstream buf;
  if (format == ReportFormat::kJson) {
    WriteJsonReport(report, buf);
  } else {
    WriteCsvReport(report, buf);
  }
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error(ErrorCode::kIoError, "cannot write " + path.string());
  out << buf.str();
  out.flush();
  if (!out) throw Error(ErrorCode::kIoError, "write failed for " + path.string());
}

MetricReport LoadReport(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::kIoError, "cannot read " + path.string());
  return FormatForPath(path) == ReportFormat::kJson ? ParseJsonReport(in) : ParseCsvReport(in);
}

// ---------------------------------------------------------------------------

MetricEntry DisplacementEntry(std::span<const DisplacementStats> rows) {
  MetricEntry e;
  e.table.columns = {"category", "dx/w", "dy/h", "dd_px", "n"};
  if (!rows.empty()) {
    e.metadata["window_seconds"] = FormatDouble(rows.front().window_seconds);
    e.metadata["frame_step"] = std::to_string(rows.front().frame_step);
  }
  e.metadata["units"] = "dx/w and dy/h in percent of image width and height; dd in pixels";
  e.metadata["normalization"] =
      "dx by image width, dy by image height (a dy/w column header elsewhere is read as dy/h)";
  e.metadata["empty_cell"] = "mean undefined, no samples";
  auto pct = [](const std::optional<double>& v) {
    return v ? std::optional<double>(100.0 * *v) : std::nullopt;
  };
  for (const DisplacementStats& s : rows) {
    e.table.rows.push_back({std::string(CategoryFilterName(s.category)),
                            OptionalCell(pct(s.mean_dx_over_w)),
                            OptionalCell(pct(s.mean_dy_over_h)), OptionalCell(s.mean_dd_px),
                            s.count});
  }
  return e;
}

MetricEntry DurationEntry(const DurationStats& s, int tolerance_frames) {
  MetricEntry e;
  e.metadata["tolerance_frames"] = std::to_string(tolerance_frames);
  e.metadata["scope"] = "pairs whose ground truth is present in the first frame";
  e.metadata["units"] = "percent";
  e.metadata["precision_recall"] = "frame counts summed over the same pairs";
  e.table.columns = {"match_pct", "fp_pct", "fn_pct", "precision", "recall", "n",
                     "tp_frames", "fp_frames", "fn_frames"};
  e.table.rows.push_back({s.match_pct, s.fp_pct, s.fn_pct, s.precision, s.recall, s.n_instances,
                          s.tp_frames, s.fp_frames, s.fn_frames});
  return e;
}

MetricEntry PresenceEntry(const PresenceCurve& c) {
  MetricEntry e;
  e.metadata["units"] = "percent of ground-truth-present instances also present in prediction";
  e.metadata["frame"] = "1-based frame number";
  e.metadata["empty_cell"] = "no ground truth present";
  e.table.columns = {"frame", "accuracy", "gt_present", "matched"};
  for (std::size_t k = 0; k < c.accuracy.size(); ++k) {
    e.table.rows.push_back({static_cast<std::int64_t>(k + 1), OptionalCell(c.accuracy[k]),
                            c.gt_present[k], c.matched[k]});
  }
  return e;
}

MetricEntry CentroidEntry(const CentroidDistStats& s) {
  MetricEntry e;
  e.metadata["units"] = "pixels";
  e.metadata["frame"] = std::to_string(s.frame_index + 1);
  e.metadata["std"] = "population";
  e.table.columns = {"frame", "mean_px", "std_px", "n", "outlier_threshold_px", "outliers"};
  e.table.rows.push_back({static_cast<std::int64_t>(s.frame_index + 1), s.mean, s.std,
                          static_cast<std::int64_t>(s.distances.size()), s.outlier_threshold,
                          s.outlier_count});
  return e;
}

MetricEntry CentroidHistogramEntry(const CentroidDistStats& s) {
  MetricEntry e;
  e.metadata["units"] = "pixels";
  e.metadata["frame"] = std::to_string(s.frame_index + 1);
  e.metadata["bins"] = "[edge, next edge); last row counts values above the final edge";
  e.table.columns = {"edge", "count"};
  const Histogram& h = s.histogram;
  for (std::size_t b = 0; b < h.counts.size(); ++b) e.table.rows.push_back({h.edges[b], h.counts[b]});
  if (!h.edges.empty()) e.table.rows.push_back({h.edges.back(), h.overflow});
  return e;
}

MetricEntry MaskDiffEntry(std::span<const MaskDiffRow> rows) {
  MetricEntry e;
  e.metadata["sign"] = "pred area minus ground-truth area";
  e.metadata["units"] = "pixels";
  e.metadata["frame"] = "1-based frame number; frame 1 is the conditioning frame";
  e.metadata["averaging"] = "per instance";
  e.metadata["std"] = "population";
  e.table.columns = {"frame", "category", "avg_diff_px", "std_px", "n"};
  for (const MaskDiffRow& r : rows) {
    e.table.rows.push_back({static_cast<std::int64_t>(r.frame_number()),
                            std::string(CategoryName(r.category)), r.avg_diff_px, r.std_px,
                            r.count});
  }
  return e;
}

MetricEntry FrechetEntry(const FrechetResult& r, const std::string& kind) {
  MetricEntry e;
  e.metadata["kind"] = kind;
  e.metadata["covariance"] = "sample (n-1)";
  e.metadata["sqrtm"] = "symmetric eigendecomposition, negative eigenvalues clamped to 0";
  e.table.columns = {"value", "mean_term", "trace_term", "degenerate_covariance",
                     "clamped_eigenvalues"};
  e.table.rows.push_back({r.distance, r.mean_term, r.trace_term,
                          static_cast<std::int64_t>(r.degenerate_covariance ? 1 : 0),
                          static_cast<std::int64_t>(r.clamped_eigenvalues)});
  return e;
}

MetricEntry ProjectionEntry(std::span<const ProjectedAnnotation> boxes,
                            const VisibilityOptions& options) {
  MetricEntry e;
  e.metadata["units"] = "pixels";
  e.metadata["frame"] = "1-based frame number";
  e.metadata["z_eps"] = FormatDouble(options.projection.z_eps);
  e.metadata["clamp_to_image"] = options.projection.clamp_to_image ? "true" : "false";
  e.metadata["require_fully_in_front"] = options.require_fully_in_front ? "true" : "false";
  e.metadata["require_in_image"] = options.require_in_image ? "true" : "false";
  e.table.columns = {"frame", "instance", "category", "x_min", "y_min", "x_max", "y_max",
                     "cx", "cy", "fully_in_front"};
  for (const ProjectedAnnotation& a : boxes) {
    const Vec2 c = a.box.centroid();
    e.table.rows.push_back({static_cast<std::int64_t>(a.frame_index + 1), a.instance_id,
                            std::string(CategoryName(a.category)), a.box.x_min, a.box.y_min,
                            a.box.x_max, a.box.y_max, c.x, c.y,
                            static_cast<std::int64_t>(a.box.fully_in_front ? 1 : 0)});
  }
  return e;
}

MetricEntry PreferenceEntry(const PreferenceStats& s, const std::string& model_a,
                            const std::string& model_b) {
  MetricEntry e;
  e.metadata["units"] = "percent of resolved choices";
  e.metadata["abstentions"] = "excluded from n, counted separately";
  e.table.columns = {"model_a", "model_b", "pct_a", "pct_b", "n", "abstained"};
  e.table.rows.push_back({model_a, model_b, s.pct_a, s.pct_b, s.n, s.abstained});
  return e;
}

MetricEntry ComplianceEntry(const ComplianceStats& s, const std::string& scenario) {
  MetricEntry e;
  e.metadata["units"] = "percent";
  e.metadata["abstentions"] = "excluded from n, counted separately";
  e.table.columns = {"scenario", "pct_correct", "n_correct", "n", "abstained"};
  e.table.rows.push_back({scenario, s.pct_correct, s.n_correct, s.n, s.abstained});
  return e;
}

}  // namespace scaeval
