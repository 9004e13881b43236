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

// sca_eval: command-line front end for the evaluation toolkit.

#include <csignal>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <memory>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <fmt/format.h>

#include "scaeval/error.hpp"
#include "scaeval/frechet.hpp"
#include "scaeval/image.hpp"
#include "scaeval/judge.hpp"
#include "scaeval/mask_metrics.hpp"
#include "scaeval/parallel.hpp"
#include "scaeval/preprocess.hpp"
#include "scaeval/projection.hpp"
#include "scaeval/report.hpp"
#include "scaeval/review.hpp"
#include "scaeval/review_server.hpp"
#include "scaeval/scene.hpp"
#include "scaeval/track_metrics.hpp"
#include "scaeval/tracks.hpp"
#include "scaeval/verdict_store.hpp"

namespace fs = std::filesystem;
using namespace scaeval;

namespace {

enum ExitCode { kOk = 0, kValidation = 1, kIo = 2 };

struct Global {
  int jobs = 1;
  std::uint64_t seed = 0;
};

struct ReportOut {
  std::string path;
  std::string model;
};

void AddReportOptions(CLI::App* cmd, ReportOut& out) {
  cmd->add_option("--out", out.path, "Report path (.csv or .json)");
  cmd->add_option("--model", out.model, "Model name recorded in the report");
}

void AddInput(MetricReport& report, const std::string& path) {
  report.provenance[path] = Sha256File(path);
}

void MaybeEmit(const MetricReport& report, const ReportOut& out) {
  if (out.path.empty()) return;
  EmitReport(report, FormatForPath(out.path), out.path);
}

void WriteText(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error(ErrorCode::kIoError, "cannot write " + path);
  out << text;
  out.flush();
  if (!out) throw Error(ErrorCode::kIoError, "write failed for " + path);
}

std::string Cell1(const std::optional<double>& v, int prec) {
  return v ? fmt::format("{:.{}f}", *v, prec) : std::string("-");
}

// ---------------------------------------------------------------------------

struct ManifestArgs {
  std::string path;
  std::string format = "auto";
  std::string scene;
  std::string camera = "CAM_FRONT";
};

void AddManifestOptions(CLI::App* cmd, ManifestArgs& m, bool required) {
  auto* opt = cmd->add_option("--manifest", m.path, "Native manifest file or nuScenes table directory");
  if (required) opt->required();
  cmd->add_option("--format", m.format, "auto, native or nuscenes")
      ->check(CLI::IsMember({"auto", "native", "nuscenes"}));
  cmd->add_option("--scene", m.scene, "nuScenes scene name or token");
  cmd->add_option("--camera", m.camera, "nuScenes camera channel");
}

bool IsNuScenes(const ManifestArgs& m) {
  return m.format == "nuscenes" || (m.format == "auto" && fs::is_directory(m.path));
}

SceneManifest LoadManifestArgs(const ManifestArgs& m) {
  const ManifestFormat format = IsNuScenes(m) ? ManifestFormat::kNuScenesTables : ManifestFormat::kNative;
  ManifestLoadOptions opts;
  if (!m.scene.empty()) opts.scene = m.scene;
  opts.camera_channel = m.camera;
  return LoadManifest(m.path, format, opts);
}

void ManifestProvenance(MetricReport& report, const std::string& path) {
  if (fs::is_directory(path)) {
    std::vector<fs::path> files;
    for (const auto& e : fs::directory_iterator(path)) {
      if (e.is_regular_file() && e.path().extension() == ".json") files.push_back(e.path());
    }
    std::sort(files.begin(), files.end());
    for (const auto& f : files) AddInput(report, f.string());
  } else {
    AddInput(report, path);
  }
}

struct VisibilityArgs {
  bool clamp = false;
  bool fully_in_front = false;
};

void AddVisibilityOptions(CLI::App* cmd, VisibilityArgs& v) {
  cmd->add_flag("--clamp", v.clamp, "Clamp projected boxes to the image");
  cmd->add_flag("--fully-in-front", v.fully_in_front,
                "Drop boxes with a corner behind the camera");
}

VisibilityOptions MakeVisibility(const VisibilityArgs& v, const SceneManifest& m) {
  VisibilityOptions o;
  o.projection.clamp_to_image = v.clamp;
  o.projection.image_width = m.image_width;
  o.projection.image_height = m.image_height;
  o.require_fully_in_front = v.fully_in_front;
  return o;
}

// ---------------------------------------------------------------------------

struct PairArgs {
  std::string gt;
  std::string pred;
};

void AddPairOptions(CLI::App* cmd, PairArgs& p) {
  cmd->add_option("--gt", p.gt, "Ground-truth track file")->required();
  cmd->add_option("--pred", p.pred, "Predicted track file")->required();
}

Pairing LoadPairing(const PairArgs& p, MetricReport& report) {
  const auto gt = LoadTracks(p.gt);
  const auto pred = LoadTracks(p.pred);
  for (const Track& t : gt) {
    if (!t.source.is_ground_truth()) {
      throw Error(ErrorCode::kInvalidArgument,
                  p.gt + ": track " + t.clip_id + "/" + t.instance_id + " is not ground truth");
    }
  }
  AddInput(report, p.gt);
  AddInput(report, p.pred);
  Pairing pairing = PairTracks(gt, pred);
  if (!pairing.unmatched_pred.empty()) {
    std::cerr << fmt::format("note: {} predicted track(s) have no ground truth:",
                             pairing.unmatched_pred.size());
    for (const Track& t : pairing.unmatched_pred) std::cerr << ' ' << t.clip_id << '/' << t.instance_id;
    std::cerr << '\n';
  }
  if (report.model_name.empty()) {
    for (const TrackPair& tp : pairing.pairs) {
      if (!tp.pred_synthetic && tp.pred.source.model) {
        report.model_name = *tp.pred.source.model;
        break;
      }
    }
  }
  return pairing;
}

// ---------------------------------------------------------------------------

int RunProject(const Global& g, const ManifestArgs& ma, const VisibilityArgs& va,
               const ReportOut& out, const std::string& tracks_out, const std::string& clip_id) {
  const SceneManifest m = LoadManifestArgs(ma);
  const VisibilityOptions vis = MakeVisibility(va, m);
  const auto boxes = ProjectScene(m, vis, g.jobs);
  MetricReport report;
  report.model_name = out.model.empty() ? "ground-truth" : out.model;
  ManifestProvenance(report, ma.path);
  report.entries["projection"] = ProjectionEntry(boxes, vis);
  if (IsNuScenes(ma)) report.entries["projection"].metadata["camera"] = ma.camera;
  MaybeEmit(report, out);
  if (!tracks_out.empty()) {
    const auto tracks = GroundTruthTracks(m, clip_id.empty() ? m.scene_id : clip_id, vis, g.jobs);
    std::ostringstream buf;
    WriteTracks(tracks, buf);
    WriteText(tracks_out, buf.str());
  }
  std::cout << fmt::format("scene {}: {} visible boxes over {} frames\n", m.scene_id, boxes.size(),
                           m.frames.size());
  return kOk;
}

struct DynArgs {
  ManifestArgs manifest;
  VisibilityArgs vis;
  std::string tracks;
  double window = 2.5;
  int width = 1600;
  int height = 900;
  std::string rate = "2/1";
};

Rational ParseRate(const std::string& text) {
  const auto slash = text.find('/');
  try {
    if (slash == std::string::npos) return {std::stoll(text), 1};
    return {std::stoll(text.substr(0, slash)), std::stoll(text.substr(slash + 1))};
  } catch (const std::exception&) {
    throw Error(ErrorCode::kInvalidArgument, "bad frame rate '" + text + "'");
  }
}

int RunDynStats(const Global& g, const DynArgs& a, const ReportOut& out) {
  if (a.manifest.path.empty() == a.tracks.empty()) {
    throw Error(ErrorCode::kInvalidArgument, "give exactly one of --manifest or --tracks");
  }
  std::vector<CategoryFilter> filters = {std::nullopt};
  for (Category c : kAllCategories) filters.push_back(c);
  std::vector<DisplacementStats> rows;
  MetricReport report;
  report.model_name = out.model;
  if (!a.manifest.path.empty()) {
    const SceneManifest m = LoadManifestArgs(a.manifest);
    const VisibilityOptions vis = MakeVisibility(a.vis, m);
    ManifestProvenance(report, a.manifest.path);
    for (const auto& f : filters) rows.push_back(ComputeDisplacementStats(m, a.window, f, vis, g.jobs));
    if (report.model_name.empty()) report.model_name = "ground-truth";
  } else {
    const Rational rate = ParseRate(a.rate);
    if (rate.num <= 0 || rate.den <= 0) throw Error(ErrorCode::kInvalidArgument, "rate must be positive");
    if (a.width <= 0 || a.height <= 0) throw Error(ErrorCode::kInvalidArgument, "image size must be positive");
    const int k = WindowFrames(a.window, rate);
    const auto tracks = LoadTracks(a.tracks);
    AddInput(report, a.tracks);
    std::vector<ActorCentroids> actors;
    int longest = 0;
    for (const Track& t : tracks) {
      ActorCentroids ac;
      ac.instance_id = t.clip_id + "/" + t.instance_id;
      ac.category = t.category;
      ac.by_frame.assign(static_cast<std::size_t>(t.clip_length), std::nullopt);
      for (const TrackObservation& o : t.observations) {
        if (o.present && o.centroid) ac.by_frame[static_cast<std::size_t>(o.frame_index)] = o.centroid;
      }
      longest = std::max(longest, t.clip_length);
      actors.push_back(std::move(ac));
      if (report.model_name.empty()) report.model_name = t.source.token();
    }
    if (longest <= k) {
      throw Error(ErrorCode::kWindowTooLong,
                  fmt::format("window spans {} frames but the longest clip has {}", k, longest));
    }
    for (const auto& f : filters) {
      DisplacementStats s = DisplacementFromSeries(actors, k, a.width, a.height, f);
      s.window_seconds = a.window;
      rows.push_back(s);
    }
  }
  report.entries["displacement"] = DisplacementEntry(rows);
  if (!a.manifest.path.empty() && IsNuScenes(a.manifest)) {
    report.entries["displacement"].metadata["camera"] = a.manifest.camera;
  }
  MaybeEmit(report, out);
  std::cout << fmt::format("{:<8} {:>8} {:>8} {:>10} {:>8}\n", "category", "dx/w%", "dy/h%", "dd_px", "n");
  for (const DisplacementStats& s : rows) {
    auto pct = [](const std::optional<double>& v) {
      return v ? std::optional<double>(100.0 * *v) : std::nullopt;
    };
    std::cout << fmt::format("{:<8} {:>8} {:>8} {:>10} {:>8}\n", CategoryFilterName(s.category),
                             Cell1(pct(s.mean_dx_over_w), 2), Cell1(pct(s.mean_dy_over_h), 2),
                             Cell1(s.mean_dd_px, 1), s.count);
  }
  return kOk;
}

int RunDuration(const Global& g, const PairArgs& p, int tolerance, const ReportOut& out) {
  MetricReport report;
  report.model_name = out.model;
  const Pairing pairing = LoadPairing(p, report);
  const DurationStats s = ComputeDurationStats(pairing.pairs, tolerance, g.jobs);
  report.entries["duration"] = DurationEntry(s, tolerance);
  MaybeEmit(report, out);
  std::cout << fmt::format("M={:.1f} FP={:.1f} FN={:.1f} P={:.1f} R={:.1f}\n", s.match_pct,
                           s.fp_pct, s.fn_pct, s.precision, s.recall);
  return kOk;
}

int RunPresence(const Global& g, const PairArgs& p, int clip_len, const ReportOut& out) {
  MetricReport report;
  report.model_name = out.model;
  const Pairing pairing = LoadPairing(p, report);
  if (clip_len <= 0) {
    for (const TrackPair& tp : pairing.pairs) clip_len = std::max(clip_len, tp.gt.clip_length);
  }
  const PresenceCurve c = ComputePresenceCurve(pairing.pairs, clip_len, g.jobs);
  report.entries["presence"] = PresenceEntry(c);
  MaybeEmit(report, out);
  for (std::size_t k = 0; k < c.accuracy.size(); ++k) {
    std::cout << fmt::format("frame {:>3} {:>6} ({}/{})\n", k + 1, Cell1(c.accuracy[k], 1),
                             c.matched[k], c.gt_present[k]);
  }
  return kOk;
}

struct CentroidArgs {
  int frame = 25;
  int bins = 50;
  std::optional<double> upper;
  double percentile = 99.5;
  double outlier = 100.0;
};

int RunCentroid(const Global& g, const PairArgs& p, const CentroidArgs& a, const ReportOut& out) {
  if (a.frame < 1) throw Error(ErrorCode::kInvalidArgument, "--frame is 1-based");
  MetricReport report;
  report.model_name = out.model;
  const Pairing pairing = LoadPairing(p, report);
  HistogramSpec hist;
  hist.bins = a.bins;
  hist.upper = a.upper;
  hist.upper_percentile = a.percentile;
  const CentroidDistStats s = ComputeCentroidDistances(pairing.pairs, a.frame - 1, hist, a.outlier, g.jobs);
  report.entries["centroid"] = CentroidEntry(s);
  report.entries["centroid_histogram"] = CentroidHistogramEntry(s);
  MaybeEmit(report, out);
  std::cout << fmt::format("frame {}: mean={:.2f} std={:.2f} n={} outliers(>{})={}\n", a.frame,
                           s.mean, s.std, s.distances.size(), FormatDouble(a.outlier),
                           s.outlier_count);
  return kOk;
}

int RunMaskDiff(const Global& g, const PairArgs& p, const std::vector<std::string>& cats,
                const ReportOut& out) {
  MetricReport report;
  report.model_name = out.model;
  const Pairing pairing = LoadPairing(p, report);
  std::vector<MaskDiffRow> rows;
  std::set<Category> seen;
  for (const std::string& name : cats) {
    const Category c = ParseCategory(name);
    if (!seen.insert(c).second) continue;
    const auto part = MaskDiffTable(pairing.pairs, c, g.jobs);
    rows.insert(rows.end(), part.begin(), part.end());
  }
  report.entries["mask_diff"] = MaskDiffEntry(rows);
  MaybeEmit(report, out);
  std::cout << fmt::format("{:>5} {:<8} {:>10} {:>10} {:>6}\n", "frame", "category", "avg_px", "std_px", "n");
  for (const MaskDiffRow& r : rows) {
    std::cout << fmt::format("{:>5} {:<8} {:>10.1f} {:>10.1f} {:>6}\n", r.frame_number(),
                             CategoryName(r.category), r.avg_diff_px, r.std_px, r.count);
  }
  return kOk;
}

int RunPreprocess(const Global& g, const std::vector<std::string>& inputs, const std::string& out_dir,
                  const std::string& mode) {
  if (inputs.empty()) throw Error(ErrorCode::kEmptyInput, "no input images");
  std::error_code ec;
  fs::create_directories(out_dir, ec);
  if (ec) throw Error(ErrorCode::kIoError, "cannot create " + out_dir + ": " + ec.message());
  std::vector<Image> frames;
  for (const std::string& in : inputs) frames.push_back(ReadPnm(fs::path(in)));
  const CropPlan plan = PlanCrop(frames.front().width(), frames.front().height());
  std::vector<Image> outs;
  if (mode == "fid") {
    outs = ParallelMap(frames.size(), g.jobs, [&](std::size_t i) { return PreprocessFid(frames[i]); });
  } else {
    outs = PreprocessFvd(frames, g.jobs);
  }
  for (std::size_t i = 0; i < outs.size(); ++i) {
    const fs::path dst = fs::path(out_dir) / (fs::path(inputs[i]).stem().string() +
                                              (outs[i].channels() == 1 ? ".pgm" : ".ppm"));
    WritePnm(outs[i], dst);
  }
  std::cout << fmt::format("{} frame(s): crop {}x{} at ({}, {}) of {}x{}, output {}x{}\n", outs.size(),
                           plan.crop_w, plan.crop_h, plan.crop_x, plan.crop_y, plan.src_w,
                           plan.src_h, outs.front().width(), outs.front().height());
  return kOk;
}

int RunFrechet(const std::string& a, const std::string& b, const std::string& kind,
               const ReportOut& out) {
  const FeatureSet fa = LoadFeatures(a);
  const FeatureSet fb = LoadFeatures(b);
  const FrechetResult r = FrechetDistance(fa, fb);
  MetricReport report;
  report.model_name = out.model.empty() ? fb.label : out.model;
  AddInput(report, a);
  AddInput(report, b);
  report.entries[kind == "fvd" ? "fvd" : kind == "fid" ? "fid" : "frechet"] = FrechetEntry(r, kind);
  MaybeEmit(report, out);
  const double shown = std::abs(r.distance) < 1e-10 ? 0.0 : r.distance;
  std::cout << fmt::format("{:.4f}\n", shown);
  if (r.degenerate_covariance) {
    std::cerr << fmt::format("note: {} negative eigenvalue(s) clamped (degenerate covariance)\n",
                             r.clamped_eigenvalues);
  }
  return kOk;
}

int RunReviewBatch(const Global& g, const std::string& items, const std::string& mode,
                   const std::string& out) {
  const auto list = LoadReviewItems(items);
  const auto tasks = CreateReviewBatch(list, ParseReviewMode(mode), g.seed);
  std::ostringstream buf;
  WriteTasks(tasks, buf);
  if (out.empty()) {
    std::cout << buf.str();
  } else {
    WriteText(out, buf.str());
    std::size_t swapped = 0;
    for (const ReviewTask& t : tasks) swapped += t.swapped ? 1 : 0;
    std::cout << fmt::format("{} task(s), {} presented swapped\n", tasks.size(), swapped);
  }
  return kOk;
}

ReviewServer* g_server = nullptr;

extern "C" void StopServer(int) {
  if (g_server != nullptr) g_server->Stop();
}

int RunServe(const std::string& tasks_path, const std::string& log, const std::string& media,
             const std::string& host, int port, int frames) {
  VerdictStore store(log, LoadTasks(tasks_path));
  if (store.recovered_bytes() > 0) {
    std::cerr << fmt::format("note: dropped {} byte(s) of a torn record from {}\n",
                             store.recovered_bytes(), log);
  }
  ReviewServer server(store, {media, frames});
  g_server = &server;
  std::signal(SIGINT, StopServer);
  std::signal(SIGTERM, StopServer);
  std::cout << fmt::format("serving {} task(s) on http://{}:{}\n", store.tasks().size(), host, port)
            << std::flush;
  server.Listen(host, port);
  g_server = nullptr;
  return kOk;
}

struct JudgeArgs {
  std::string tasks;
  std::string log;
  std::string media;
  std::string endpoint;
  std::string path = "/v1/chat/completions";
  std::string model;
  std::string session = "ai-judge";
  int stride = 4;
  int frames = 25;
  int retries = 2;
  int timeout_ms = 60000;
};

int RunJudge(const JudgeArgs& a) {
  VerdictStore store(a.log, LoadTasks(a.tasks));
  std::vector<ReviewTask> pending;
  for (const ReviewTask& t : store.tasks()) {
    if (!store.HasVerdict(t.task_id, a.session)) pending.push_back(t);
  }
  EndpointDescriptor ep;
  ep.base_url = a.endpoint;
  ep.path = a.path;
  ep.model = a.model;
  ep.timeout = std::chrono::milliseconds(a.timeout_ms);
  HttpChatTransport transport(ep);
  JudgeOptions opts;
  opts.model_name = a.model;
  opts.session_id = a.session;
  opts.max_retries = a.retries;
  const FrameSource frames = MediaDirectoryFrames(a.media);
  std::int64_t total_abstained = 0;
  std::int64_t total_retries = 0;
  for (ReviewMode mode : {ReviewMode::kPreference2AFC, ReviewMode::kCompliance}) {
    std::vector<ReviewTask> batch;
    for (const ReviewTask& t : pending) {
      if (t.mode == mode) batch.push_back(t);
    }
    if (batch.empty()) continue;
    JudgePromptSpec prompt =
        mode == ReviewMode::kPreference2AFC ? DefaultPreferencePrompt() : DefaultCompliancePrompt();
    prompt.frame_stride = a.stride;
    prompt.frames_per_clip = a.frames;
    // One task at a time so verdicts reach the log as they arrive.
    for (const ReviewTask& t : batch) {
      const JudgeRun run = RunAiJudge(std::span<const ReviewTask>(&t, 1), prompt, transport, frames, opts);
      for (const Verdict& v : run.verdicts) store.Record(v);
      total_abstained += run.abstained;
      total_retries += run.retries;
    }
  }
  std::cout << fmt::format("judged {} task(s) with {} (stride {} of {} frames): {} abstained, {} retries\n",
                           pending.size(), a.model, a.stride, a.frames, total_abstained, total_retries);
  return kOk;
}

int RunScore(const std::vector<std::string>& reports, const std::string& weights) {
  MetricReport merged;
  for (const std::string& r : reports) merged.Merge(LoadReport(r));
  const WeightSpec spec = LoadWeightSpec(weights);
  std::cout << fmt::format("{}\n", FormatDouble(CompositeScore(merged, spec)));
  return kOk;
}

struct ReportArgs {
  std::vector<std::string> inputs;
  std::string tasks;
  std::string log;
  std::string model_a;
  std::string model_b;
  std::vector<std::string> scenarios;
  std::string compliance_model;
};

int RunReport(const ReportArgs& a, const ReportOut& out) {
  if (out.path.empty()) throw Error(ErrorCode::kInvalidArgument, "--out is required");
  MetricReport report;
  for (const std::string& r : a.inputs) report.Merge(LoadReport(r));
  if (!out.model.empty()) report.model_name = out.model;
  if (!a.tasks.empty() || !a.log.empty()) {
    if (a.tasks.empty() || a.log.empty()) {
      throw Error(ErrorCode::kInvalidArgument, "review statistics need both --tasks and --log");
    }
    const auto tasks = LoadTasks(a.tasks);
    const auto verdicts = VerdictStore::ReadLog(a.log);
    AddInput(report, a.tasks);
    AddInput(report, a.log);
    if (!a.model_a.empty() || !a.model_b.empty()) {
      if (a.model_a.empty() || a.model_b.empty()) {
        throw Error(ErrorCode::kInvalidArgument, "--model-a and --model-b go together");
      }
      const PreferenceStats s = ComputePreferenceStats(tasks, verdicts, a.model_a, a.model_b);
      report.entries["preference/" + a.model_a + "_vs_" + a.model_b] =
          PreferenceEntry(s, a.model_a, a.model_b);
      std::cout << fmt::format("{} {:.1f}% / {} {:.1f}% (n={}, abstained={})\n", a.model_a, s.pct_a,
                               a.model_b, s.pct_b, s.n, s.abstained);
    }
    for (const std::string& sc : a.scenarios) {
      std::optional<std::string_view> model;
      if (!a.compliance_model.empty()) model = a.compliance_model;
      const ComplianceStats s = ComputeComplianceStats(tasks, verdicts, sc, model);
      report.entries["compliance/" + sc] = ComplianceEntry(s, sc);
      std::cout << fmt::format("{}: {:.1f}% correct (n={}, abstained={})\n", sc, s.pct_correct, s.n,
                               s.abstained);
    }
  }
  EmitReport(report, FormatForPath(out.path), out.path);
  std::cout << fmt::format("{} entr{} written to {}\n", report.entries.size(),
                           report.entries.size() == 1 ? "y" : "ies", out.path);
  return kOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"sca-eval: evaluation toolkit for driving world-model rollouts"};
  app.require_subcommand(1);
  app.fallthrough();
  Global g;
  app.add_option("--jobs", g.jobs, "Worker threads")->check(CLI::Range(1, 1024));
  app.add_option("--seed", g.seed, "Seed for every random choice");

  std::function<int()> run;

  // project
  ManifestArgs p_manifest;
  VisibilityArgs p_vis;
  ReportOut p_out;
  std::string p_tracks_out;
  std::string p_clip;
  auto* project = app.add_subcommand("project", "Project 3D annotations to 2D boxes");
  AddManifestOptions(project, p_manifest, true);
  AddVisibilityOptions(project, p_vis);
  AddReportOptions(project, p_out);
  project->add_option("--tracks-out", p_tracks_out, "Also write ground-truth tracks");
  project->add_option("--clip-id", p_clip, "Clip id for --tracks-out (default: scene id)");
  project->callback([&] { run = [&] { return RunProject(g, p_manifest, p_vis, p_out, p_tracks_out, p_clip); }; });

  // dyn-stats
  DynArgs d;
  ReportOut d_out;
  auto* dyn = app.add_subcommand("dyn-stats", "Average actor displacement over a time window");
  AddManifestOptions(dyn, d.manifest, false);
  AddVisibilityOptions(dyn, d.vis);
  dyn->add_option("--tracks", d.tracks, "Track file (instead of --manifest)");
  dyn->add_option("--window", d.window, "Window in seconds")->capture_default_str();
  dyn->add_option("--width", d.width, "Image width for --tracks")->capture_default_str();
  dyn->add_option("--height", d.height, "Image height for --tracks")->capture_default_str();
  dyn->add_option("--rate", d.rate, "Key-frame rate for --tracks (Hz or num/den)")->capture_default_str();
  AddReportOptions(dyn, d_out);
  dyn->callback([&] { run = [&] { return RunDynStats(g, d, d_out); }; });

  // duration
  PairArgs du_pairs;
  int du_tol = 0;
  ReportOut du_out;
  auto* duration = app.add_subcommand("duration", "Appearing-length match, FP, FN, precision, recall");
  AddPairOptions(duration, du_pairs);
  duration->add_option("--tolerance", du_tol, "Tolerance in frames")->capture_default_str()->check(CLI::NonNegativeNumber);
  AddReportOptions(duration, du_out);
  duration->callback([&] { run = [&] { return RunDuration(g, du_pairs, du_tol, du_out); }; });

  // presence
  PairArgs pr_pairs;
  int pr_len = 0;
  ReportOut pr_out;
  auto* presence = app.add_subcommand("presence", "Per-frame presence matching accuracy");
  AddPairOptions(presence, pr_pairs);
  presence->add_option("--clip-len", pr_len, "Frames (default: longest ground-truth clip)");
  AddReportOptions(presence, pr_out);
  presence->callback([&] { run = [&] { return RunPresence(g, pr_pairs, pr_len, pr_out); }; });

  // centroid
  PairArgs ce_pairs;
  CentroidArgs ce;
  ReportOut ce_out;
  auto* centroid = app.add_subcommand("centroid", "Centroid distance distribution at one frame");
  AddPairOptions(centroid, ce_pairs);
  centroid->add_option("--frame", ce.frame, "1-based frame number")->capture_default_str();
  centroid->add_option("--bins", ce.bins, "Histogram bins")->capture_default_str()->check(CLI::PositiveNumber);
  centroid->add_option("--hist-upper", ce.upper, "Upper histogram edge in pixels");
  centroid->add_option("--hist-percentile", ce.percentile, "Percentile for the upper edge")->capture_default_str();
  centroid->add_option("--outlier", ce.outlier, "Outlier threshold in pixels")->capture_default_str();
  AddReportOptions(centroid, ce_out);
  centroid->callback([&] { run = [&] { return RunCentroid(g, ce_pairs, ce, ce_out); }; });

  // mask-diff
  PairArgs md_pairs;
  std::vector<std::string> md_cats = {"human", "vehicle"};
  ReportOut md_out;
  auto* mask = app.add_subcommand("mask-diff", "Per-frame mask area difference (pred - gt)");
  AddPairOptions(mask, md_pairs);
  mask->add_option("--category", md_cats, "Categories to tabulate")->capture_default_str();
  AddReportOptions(mask, md_out);
  mask->callback([&] { run = [&] { return RunMaskDiff(g, md_pairs, md_cats, md_out); }; });

  // preprocess
  std::vector<std::string> pp_in;
  std::string pp_out;
  std::string pp_mode = "fid";
  auto* pre = app.add_subcommand("preprocess", "Crop and resize frames for FID or FVD");
  pre->add_option("inputs", pp_in, "PPM/PGM frames (FVD: one clip, in order)")->required();
  pre->add_option("--out-dir", pp_out, "Output directory")->required();
  pre->add_option("--mode", pp_mode, "fid or fvd")->capture_default_str()->check(CLI::IsMember({"fid", "fvd"}));
  pre->callback([&] { run = [&] { return RunPreprocess(g, pp_in, pp_out, pp_mode); }; });

  // frechet
  std::string fr_a;
  std::string fr_b;
  std::string fr_kind = "fid";
  ReportOut fr_out;
  auto* frechet = app.add_subcommand("frechet", "Frechet distance between two feature sets");
  frechet->add_option("a", fr_a, "Reference features")->required();
  frechet->add_option("b", fr_b, "Generated features")->required();
  frechet->add_option("--kind", fr_kind, "fid or fvd")->capture_default_str()->check(CLI::IsMember({"fid", "fvd"}));
  AddReportOptions(frechet, fr_out);
  frechet->callback([&] { run = [&] { return RunFrechet(fr_a, fr_b, fr_kind, fr_out); }; });

  // review-batch
  std::string rb_items;
  std::string rb_mode = "2afc";
  std::string rb_out;
  auto* batch = app.add_subcommand("review-batch", "Create a counterbalanced review batch");
  batch->add_option("--items", rb_items, "Item list (pair/clip lines)")->required();
  batch->add_option("--mode", rb_mode, "2afc or compliance")->capture_default_str()
      ->check(CLI::IsMember({"2afc", "compliance"}));
  batch->add_option("--out", rb_out, "Task file (JSON lines); stdout when omitted");
  batch->callback([&] { run = [&] { return RunReviewBatch(g, rb_items, rb_mode, rb_out); }; });

  // serve
  std::string sv_tasks;
  std::string sv_log;
  std::string sv_media;
  std::string sv_host = "127.0.0.1";
  int sv_port = 8080;
  int sv_frames = 25;
  auto* serve = app.add_subcommand("serve", "Serve the review HTTP API");
  serve->add_option("--tasks", sv_tasks, "Task file")->required();
  serve->add_option("--log", sv_log, "Verdict log (created if missing)")->required();
  serve->add_option("--media", sv_media, "Media root <model>/<clip>/<frame>.jpg")->required();
  serve->add_option("--host", sv_host, "Bind address")->capture_default_str();
  serve->add_option("--port", sv_port, "Port")->capture_default_str()->check(CLI::Range(0, 65535));
  serve->add_option("--frames", sv_frames, "Frames per clip")->capture_default_str()->check(CLI::PositiveNumber);
  serve->callback([&] { run = [&] { return RunServe(sv_tasks, sv_log, sv_media, sv_host, sv_port, sv_frames); }; });

  // judge
  JudgeArgs ja;
  auto* judge = app.add_subcommand("judge", "Collect verdicts from a chat-completion model");
  judge->add_option("--tasks", ja.tasks, "Task file")->required();
  judge->add_option("--log", ja.log, "Verdict log")->required();
  judge->add_option("--media", ja.media, "Media root")->required();
  judge->add_option("--endpoint", ja.endpoint, "Base URL, token from $SCA_EVAL_JUDGE_TOKEN")->required();
  judge->add_option("--path", ja.path, "Request path")->capture_default_str();
  judge->add_option("--judge-model", ja.model, "Model name sent to the endpoint")->required();
  judge->add_option("--session", ja.session, "Session id for the verdicts")->capture_default_str();
  judge->add_option("--stride", ja.stride, "Send every k-th frame")->capture_default_str()->check(CLI::PositiveNumber);
  judge->add_option("--frames", ja.frames, "Frames per clip")->capture_default_str()->check(CLI::PositiveNumber);
  judge->add_option("--retries", ja.retries, "Retries per task")->capture_default_str()->check(CLI::NonNegativeNumber);
  judge->add_option("--timeout-ms", ja.timeout_ms, "Request timeout")->capture_default_str()->check(CLI::PositiveNumber);
  judge->callback([&] { run = [&] { return RunJudge(ja); }; });

  // score
  std::vector<std::string> sc_reports;
  std::string sc_weights;
  auto* score = app.add_subcommand("score", "Weighted composite score over reports");
  score->add_option("--report", sc_reports, "Report file(s)")->required();
  score->add_option("--weights", sc_weights, "Weight spec (JSON)")->required();
  score->callback([&] { run = [&] { return RunScore(sc_reports, sc_weights); }; });

  // report
  ReportArgs ra;
  ReportOut ra_out;
  auto* rep = app.add_subcommand("report", "Merge reports and add review statistics");
  rep->add_option("--in", ra.inputs, "Reports to merge");
  rep->add_option("--tasks", ra.tasks, "Review task file");
  rep->add_option("--log", ra.log, "Verdict log");
  rep->add_option("--model-a", ra.model_a, "Preference: first model");
  rep->add_option("--model-b", ra.model_b, "Preference: second model");
  rep->add_option("--scenario", ra.scenarios, "Compliance scenario(s)");
  rep->add_option("--compliance-model", ra.compliance_model, "Compliance: restrict to one model");
  AddReportOptions(rep, ra_out);
  rep->callback([&] { run = [&] { return RunReport(ra, ra_out); }; });

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kOk : kValidation;
  }

  try {
    return run();
  } catch (const Error& e) {
    std::cerr << "error [" << ErrorCodeName(e.code()) << "]: " << e.detail() << '\n';
    return e.is_io() ? kIo : kValidation;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kValidation;
  }
}
