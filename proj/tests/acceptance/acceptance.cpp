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

// Acceptance runner: one PASS/FAIL line per criterion, exit status 1 when
// any fails. Usage: scaeval_acceptance [path/to/sca_eval]

#include <sys/wait.h>

#include <chrono>
#include <cstdio>
#include <fstream>
#include <functional>
#include <random>
#include <sstream>

#include <Eigen/QR>
#include <fmt/core.h>

#include "oracles.hpp"
#include "scaeval/frechet.hpp"
#include "scaeval/mask_metrics.hpp"
#include "scaeval/preprocess.hpp"
#include "scaeval/review.hpp"
#include "scaeval/track_metrics.hpp"
#include "scaeval/verdict_store.hpp"
#include "test_util.hpp"

namespace scaeval {
namespace {

using testing::Uniform;
using testing::UniformInt;

struct Outcome {
  bool pass = true;
  std::string detail;

  void Check(bool ok, const std::string& what) {
    if (!ok && pass) {
      pass = false;
      detail = what;
    }
  }
};

const TrackSource kGt = TrackSource::GroundTruth();
const TrackSource kModel = TrackSource::Model("m");

// --- geometry ---------------------------------------------------------------

Outcome Geometry() {
  Outcome o;
  std::mt19937_64 rng(1);
  const Quaternion cam_to_ego{0.5, -0.5, 0.5, -0.5};
  int well_posed = 0;
  int near_plane = 0;
  double worst = 0.0;
  double worst_rel = 0.0;  // meters
  const auto start = std::chrono::steady_clock::now();
  for (int i = 0; i < 10000; ++i) {
    const Pose ego{{Uniform(rng, -2000, 2000), Uniform(rng, -2000, 2000), Uniform(rng, -5, 5)},
                   testing::RandomRotation(rng)};
    CameraCalib cam;
    cam.extrinsic = {{Uniform(rng, -2, 2), Uniform(rng, -1, 1), Uniform(rng, 0, 2)},
                     testing::RandomYaw(rng) * cam_to_ego};
    cam.fx = Uniform(rng, 300, 2000);
    cam.fy = cam.fx * Uniform(rng, 0.9, 1.1);
    cam.cx = Uniform(rng, 200, 1000);
    cam.cy = Uniform(rng, 200, 600);
    // Mostly in front of the camera, some straddling or behind.
    const Vec3 in_cam{Uniform(rng, -30, 30), Uniform(rng, -5, 5), Uniform(rng, -10, 90)};
    const Eigen::Vector4d w =
        oracle::WorldFromCamera(ego, cam) * Eigen::Vector4d(in_cam.x, in_cam.y, in_cam.z, 1);
    const Box3D box{{w.x(), w.y(), w.z()},
                    {Uniform(rng, 0.3, 3), Uniform(rng, 0.3, 12), Uniform(rng, 0.3, 4)},
                    testing::RandomRotation(rng)};
    const auto got = ProjectBox(box, ego, cam);
    const auto want = oracle::ProjectBox(box, ego, cam);
    o.Check(got.has_value() == want.has_value(), fmt::format("visibility differs at case {}", i));
    if (!got || !want) continue;
    o.Check(got->fully_in_front == want->fully_in_front, fmt::format("front flag at case {}", i));
    // Corners within 10 cm of the image plane land millions of pixels out.
    // There the error is set by how well the depth itself is known (world
    // coordinates in the thousands of meters), so it is checked as an
    // equivalent depth error |du| * z / |u|.
    const bool well = want->min_depth >= 0.1;
    well ? ++well_posed : ++near_plane;
    const double g[] = {got->x_min, got->y_min, got->x_max, got->y_max};
    const double r[] = {want->x_min, want->y_min, want->x_max, want->y_max};
    for (int k = 0; k < 4; ++k) {
      const double d = std::abs(g[k] - r[k]);
      if (well) {
        worst = std::max(worst, d);
      } else {
        worst_rel = std::max(worst_rel, d * want->min_depth / std::max(1.0, std::abs(r[k])));
      }
    }
  }
  const double secs =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  o.Check(worst <= 1e-6, fmt::format("max deviation {:.3g} px", worst));
  o.Check(worst_rel <= 1e-11, fmt::format("near-plane depth-equivalent error {:.3g} m", worst_rel));
  o.Check(secs < 5.0, fmt::format("took {:.2f} s", secs));
  if (o.pass) {
    o.detail = fmt::format(
        "10000 cases, {} visible: max deviation {:.2g} px; {} near-plane: depth-equivalent {:.2g} m; {:.2f} s",
        well_posed, worst, near_plane, worst_rel, secs);
  }
  return o;
}

// --- displacement -----------------------------------------------------------

Outcome Displacement() {
  Outcome o;
  const auto still = ComputeDisplacementStats(testing::LateralScene(std::vector<double>(6, 3.0)),
                                              2.5, std::nullopt);
  o.Check(still.count == 1 && *still.mean_dx_over_w == 0.0 && *still.mean_dy_over_h == 0.0 &&
              *still.mean_dd_px == 0.0,
          "static scene is not zero");
  const double dx = 100.0 / testing::LateralCentroidGain();
  const auto moving = ComputeDisplacementStats(
      testing::LateralScene({3.0, 3.0, 3.0, 3.0, 3.0, 3.0 + dx}), 2.5, std::nullopt);
  const double pct = 100.0 * *moving.mean_dx_over_w;
  o.Check(moving.frame_step == 5, "window is not five key frames");
  o.Check(std::abs(pct - 6.25) < 1e-9, fmt::format("lateral dx/w = {}%", pct));
  o.Check(std::abs(*moving.mean_dd_px - 100.0) < 1e-9, "lateral dd != 100 px");

  std::mt19937_64 rng(2);
  std::vector<ActorCentroids> actors(20);
  for (auto& a : actors) {
    a.category = UniformInt(rng, 0, 1) ? Category::kHuman : Category::kVehicle;
    for (int f = 0; f < 15; ++f) {
      if (UniformInt(rng, 0, 5) == 0) {
        a.by_frame.push_back(std::nullopt);
      } else {
        a.by_frame.push_back(Vec2{Uniform(rng, -100, 1700), Uniform(rng, -100, 1000)});
      }
    }
  }
  const auto base = DisplacementFromSeries(actors, 5, 1600, 900, std::nullopt);
  double worst = 0.0;
  for (int i = 0; i < 1000; ++i) {
    const Vec2 off{Uniform(rng, -1e5, 1e5), Uniform(rng, -1e5, 1e5)};
    auto shifted = actors;
    for (auto& a : shifted) {
      for (auto& p : a.by_frame) {
        if (p) p = Vec2{p->x + off.x, p->y + off.y};
      }
    }
    const auto s = DisplacementFromSeries(shifted, 5, 1600, 900, std::nullopt);
    o.Check(s.count == base.count, "count changed under shift");
    worst = std::max({worst, std::abs(*s.mean_dx_over_w - *base.mean_dx_over_w),
                      std::abs(*s.mean_dy_over_h - *base.mean_dy_over_h),
                      std::abs(*s.mean_dd_px - *base.mean_dd_px) / 1600.0});
  }
  o.Check(worst < 1e-9, fmt::format("shift changed a mean by {:.3g}", worst));
  if (o.pass) o.detail = fmt::format("static 0, lateral {:.6f}%, 1000 shifts max change {:.2g}", pct, worst);
  return o;
}

// --- duration ---------------------------------------------------------------

std::vector<TrackPair> RandomDurationSet(std::mt19937_64& rng) {
  std::vector<TrackPair> pairs;
  const int n = UniformInt(rng, 1, 40);
  for (int i = 0; i < n; ++i) {
    const int len = UniformInt(rng, 1, 25);
    const std::string id = "i" + std::to_string(i);
    Track g = testing::RunTrack(id, kGt, len, UniformInt(rng, 0, len));
    Track p = testing::RunTrack(id, kModel, len, UniformInt(rng, 0, len));
    // Re-appearances after the first gap.
    for (Track* t : {&g, &p}) {
      const int back = UniformInt(rng, 0, len);
      for (int f = back; f < len; ++f) {
        if (f > 0 && !t->observations[f - 1].present && UniformInt(rng, 0, 1)) t->observations[f].present = true;
      }
    }
    pairs.push_back(testing::MakePair(std::move(g), std::move(p)));
  }
  pairs.push_back(testing::MakePair(testing::RunTrack("z", kGt, 4, 2), testing::RunTrack("z", kModel, 4, 3)));
  return pairs;
}

Outcome Duration() {
  Outcome o;
  const std::vector<TrackPair> fixture = {
      testing::MakePair(testing::RunTrack("a", kGt, 25, 10), testing::RunTrack("a", kModel, 25, 10)),
      testing::MakePair(testing::RunTrack("b", kGt, 25, 10), testing::RunTrack("b", kModel, 25, 15)),
      testing::MakePair(testing::RunTrack("c", kGt, 25, 10), testing::RunTrack("c", kModel, 25, 5)),
  };
  const auto s = ComputeDurationStats(fixture, 0);
  const std::string shown = fmt::format("M={:.1f} FP={:.1f} FN={:.1f} P={:.1f} R={:.1f}", s.match_pct,
                                        s.fp_pct, s.fn_pct, s.precision, s.recall);
  o.Check(shown == "M=33.3 FP=33.3 FN=33.3 P=83.3 R=83.3", "fixture gave " + shown);
  o.Check(s.match_pct == 100.0 / 3.0 && s.precision == 250.0 / 3.0 && s.recall == 250.0 / 3.0,
          "fixture is not exactly 100/3 and 250/3");

  std::mt19937_64 rng(3);
  double worst_sum = 0.0;
  for (int set = 0; set < 1000; ++set) {
    const auto pairs = RandomDurationSet(rng);
    double last = -1.0;
    for (int tol = 0; tol <= 5; ++tol) {
      const auto d = ComputeDurationStats(pairs, tol);
      const auto ref = oracle::Duration(pairs, tol);
      worst_sum = std::max(worst_sum, std::abs(d.match_pct + d.fp_pct + d.fn_pct - 100.0));
      o.Check(d.match_pct >= last, fmt::format("match fell at set {} tolerance {}", set, tol));
      o.Check(d.n_match == ref.match && d.n_fp == ref.fp && d.n_fn == ref.fn &&
                  d.tp_frames == ref.tp_frames && d.fp_frames == ref.fp_frames &&
                  d.fn_frames == ref.fn_frames,
              fmt::format("oracle mismatch at set {} tolerance {}", set, tol));
      last = d.match_pct;
    }
  }
  o.Check(worst_sum <= 0.1, fmt::format("class sum off by {}", worst_sum));
  if (o.pass) o.detail = fmt::format("{}; 1000 sets x tolerance 0..5, max sum error {:.2g}", shown, worst_sum);
  return o;
}

// --- presence ---------------------------------------------------------------

Outcome Presence() {
  Outcome o;
  std::mt19937_64 rng(4);
  std::vector<TrackPair> same;
  for (int i = 0; i < 30; ++i) {
    const Track g = testing::RunTrack("i" + std::to_string(i), kGt, 25, UniformInt(rng, 1, 25));
    same.push_back(testing::MakePair(g, g));
  }
  const auto flat = ComputePresenceCurve(same, 25);
  for (std::size_t k = 0; k < flat.accuracy.size(); ++k) {
    o.Check(!flat.accuracy[k] || *flat.accuracy[k] == 100.0, fmt::format("(GT,GT) frame {}", k + 1));
  }
  // Four actors; predictions drop out at frames 12, 18 and 20 (0-based).
  std::vector<TrackPair> drop = {
      testing::MakePair(testing::RunTrack("a", kGt, 25, 25), testing::RunTrack("a", kModel, 25, 25)),
      testing::MakePair(testing::RunTrack("b", kGt, 25, 25), testing::RunTrack("b", kModel, 25, 12)),
      testing::MakePair(testing::RunTrack("c", kGt, 25, 25), testing::RunTrack("c", kModel, 25, 18)),
      testing::MakePair(testing::RunTrack("d", kGt, 25, 20), testing::RunTrack("d", kModel, 25, 25)),
  };
  std::vector<std::optional<double>> expected(25);
  for (int k = 0; k < 25; ++k) {
    // Hand count: present GT actors, and those the prediction also shows.
    const int gt = k < 20 ? 4 : 3;
    int hit = (k < 20 ? 1 : 0) + 1 + (k < 12 ? 1 : 0) + (k < 18 ? 1 : 0);
    expected[k] = 100.0 * hit / gt;
  }
  const auto curve = ComputePresenceCurve(drop, 25);
  o.Check(curve.accuracy == expected, "drop-out curve differs from the hand count");
  if (o.pass) o.detail = "(GT,GT) flat at 100%, drop-out curve exact over 25 frames";
  return o;
}

// --- mask diff --------------------------------------------------------------

Outcome MaskDiff() {
  Outcome o;
  std::mt19937_64 rng(5);
  double worst = 0.0;
  for (int fx = 0; fx < 100; ++fx) {
    std::vector<TrackPair> pairs;
    const int len = UniformInt(rng, 2, 25);
    for (int i = 0; i < UniformInt(rng, 1, 15); ++i) {
      const auto cat = UniformInt(rng, 0, 1) ? Category::kHuman : Category::kVehicle;
      Track g = testing::RunTrack(std::to_string(i), kGt, len, UniformInt(rng, 0, len), cat);
      Track p = testing::RunTrack(std::to_string(i), kModel, len, UniformInt(rng, 0, len), cat);
      for (Track* t : {&g, &p}) {
        for (auto& ob : t->observations) {
          if (ob.present) ob.mask_area = UniformInt(rng, 0, 200000);
        }
      }
      pairs.push_back(testing::MakePair(std::move(g), std::move(p)));
    }
    for (Category cat : {Category::kHuman, Category::kVehicle}) {
      std::vector<TrackPair> same, swapped;
      for (const auto& p : pairs) {
        same.push_back(testing::MakePair(p.gt, p.gt));
        swapped.push_back(testing::MakePair(p.pred, p.gt));
      }
      for (const auto& r : MaskDiffTable(same, cat)) {
        o.Check(r.avg_diff_px == 0.0 && r.std_px == 0.0, "(GT,GT) row not zero");
      }
      const auto fwd = MaskDiffTable(pairs, cat, 4);
      const auto rev = MaskDiffTable(swapped, cat);
      o.Check(fwd.size() == rev.size(), "row count differs after swap");
      for (std::size_t i = 0; i < fwd.size() && i < rev.size(); ++i) {
        o.Check(fwd[i].avg_diff_px == -rev[i].avg_diff_px && fwd[i].std_px == rev[i].std_px,
                fmt::format("swap antisymmetry fixture {} frame {}", fx, fwd[i].frame_number()));
        std::vector<double> d;
        for (const auto& p : pairs) {
          if (p.gt.category != cat) continue;
          const auto& g = p.gt.observations[fwd[i].frame_index];
          const auto& q = p.pred.observations[fwd[i].frame_index];
          if (g.present && q.present) d.push_back(static_cast<double>(*q.mask_area - *g.mask_area));
        }
        o.Check(static_cast<std::size_t>(fwd[i].count) == d.size(), "sample count");
        if (d.empty()) continue;
        const auto ref = oracle::TwoPass(d);
        auto rel = [](double a, double b) { return std::abs(a - b) / std::max(1.0, std::abs(b)); };
        worst = std::max({worst, rel(fwd[i].avg_diff_px, ref.mean), rel(fwd[i].std_px, ref.std)});
      }
    }
  }
  o.Check(worst <= 1e-9, fmt::format("oracle relative error {:.3g}", worst));
  if (o.pass) o.detail = fmt::format("100 fixtures, max relative error vs two-pass {:.2g}", worst);
  return o;
}

// --- crop plan --------------------------------------------------------------

Outcome CropSweep() {
  Outcome o;
  const CropPlan wide = PlanCrop(1600, 900);
  o.Check(wide.crop_w == 1575 && wide.crop_h == 900 && wide.crop_x == 12 && wide.crop_y == 0,
          fmt::format("1600x900 gave {}x{} at ({}, {})", wide.crop_w, wide.crop_h, wide.crop_x, wide.crop_y));
  double worst = 0.0;
  for (int w = 1; w <= 512 && o.pass; ++w) {
    for (int h = 1; h <= 512; ++h) {
      const CropPlan p = PlanCrop(w, h);
      const bool inside = p.crop_x >= 0 && p.crop_y >= 0 && p.crop_w >= 1 && p.crop_h >= 1 &&
                          p.crop_x + p.crop_w <= w && p.crop_y + p.crop_h <= h;
      o.Check(inside, fmt::format("{}x{} window out of bounds", w, h));
      // Deviation of the rounded side from the exact 448:256 extent.
      const double dev = p.crop_w == w ? std::abs(p.crop_h - w * 256.0 / 448.0)
                                       : std::abs(p.crop_w - h * 448.0 / 256.0);
      o.Check(p.crop_w == w || p.crop_h == h, fmt::format("{}x{} crops both sides", w, h));
      if (std::min(p.crop_w, p.crop_h) > 1) worst = std::max(worst, dev);
      if (!o.pass) break;
    }
  }
  o.Check(worst <= 1.0, fmt::format("aspect off by {} px", worst));
  if (o.pass) o.detail = fmt::format("512x512 sources in bounds, max aspect error {:.3f} px", worst);
  return o;
}

// --- Frechet ----------------------------------------------------------------

FeatureSet Gaussian(std::mt19937_64& rng, int dim, int count, double shift) {
  FeatureSet s;
  s.label = "g";
  s.dim = dim;
  std::normal_distribution<double> n(0.0, 1.0);
  for (int i = 0; i < count; ++i) {
    std::vector<double> v(dim);
    for (int d = 0; d < dim; ++d) v[d] = shift + n(rng) * (0.5 + 0.1 * d) + (d > 0 ? 0.3 * v[d - 1] : 0.0);
    s.vectors.push_back(v);
  }
  return s;
}

FeatureSet Line(std::vector<double> v) {
  FeatureSet s;
  s.dim = 1;
  for (double x : v) s.vectors.push_back({x});
  return s;
}

Outcome Frechet() {
  Outcome o;
  std::mt19937_64 rng(6);
  const auto a = Gaussian(rng, 16, 60, 0.0);
  const double self = FrechetDistance(a, a).distance;
  o.Check(std::abs(self) < 1e-8, fmt::format("identical sets gave {:.3g}", self));
  const double shift = FrechetDistance(Line({-1, 0, 1}), Line({0, 1, 2})).distance;
  const double spread = FrechetDistance(Line({-1, 0, 1}), Line({-3, 0, 3})).distance;
  o.Check(std::abs(shift - 1.0) < 1e-8, fmt::format("mean shift gave {}", shift));
  o.Check(std::abs(spread - 4.0) < 1e-8, fmt::format("sigma 1 vs 3 gave {}", spread));
  double asym = 0.0;
  for (int i = 0; i < 100; ++i) {
    const auto x = Gaussian(rng, 16, UniformInt(rng, 20, 80), 0.0);
    const auto y = Gaussian(rng, 16, UniformInt(rng, 20, 80), Uniform(rng, -1, 1));
    asym = std::max(asym, std::abs(FrechetDistance(x, y).distance - FrechetDistance(y, x).distance));
  }
  o.Check(asym < 1e-8, fmt::format("asymmetry {:.3g}", asym));
  double worst_rel = 0.0;
  for (int i = 0; i < 10; ++i) {
    const auto x = Gaussian(rng, 16, 50, 0.0);
    const auto y = Gaussian(rng, 16, 50, 0.5);
    Eigen::MatrixXd m(16, 16);
    for (int k = 0; k < 256; ++k) m.data()[k] = Uniform(rng, -1, 1);
    const Eigen::MatrixXd q = Eigen::HouseholderQR<Eigen::MatrixXd>(m).householderQ();
    auto map = [&](FeatureSet s) {
      for (auto& v : s.vectors) {
        const Eigen::VectorXd t = q * Eigen::Map<Eigen::VectorXd>(v.data(), 16);
        v.assign(t.data(), t.data() + 16);
      }
      return s;
    };
    const double before = FrechetDistance(x, y).distance;
    const double after = FrechetDistance(map(x), map(y)).distance;
    worst_rel = std::max(worst_rel, std::abs(before - after) / std::abs(before));
  }
  o.Check(worst_rel < 1e-6, fmt::format("orthogonal map changed d by {:.3g} relative", worst_rel));
  if (o.pass) {
    o.detail = fmt::format("self {:.2g}, closed forms exact, asymmetry {:.2g}, rotation {:.2g}", self,
                           asym, worst_rel);
  }
  return o;
}

// --- review backbone --------------------------------------------------------

Outcome Review() {
  Outcome o;
  ReviewTask t;
  t.task_id = "t";
  t.clip_a = {"X", "c"};
  t.clip_b = ClipRef{"Y", "c"};
  const char* want[2][2] = {{"X", "Y"}, {"Y", "X"}};
  for (int swapped = 0; swapped < 2; ++swapped) {
    t.swapped = swapped == 1;
    o.Check(ResolvePreference(t, Choice::kA)->model == want[swapped][0] &&
                ResolvePreference(t, Choice::kB)->model == want[swapped][1],
            fmt::format("truth table row swapped={}", swapped));
  }

  std::vector<ReviewItem> items;
  for (int i = 0; i < 1000; ++i) {
    items.push_back({{"ours", "c" + std::to_string(i)}, ClipRef{"base", "c" + std::to_string(i)}, {}});
  }
  const auto tasks = CreateReviewBatch(items, ReviewMode::kPreference2AFC, 7);
  testing::TempDir dir;
  PreferenceStats live;
  {
    VerdictStore store(dir / "log.jsonl", tasks);
    for (std::size_t i = 0; i < tasks.size(); ++i) {
      const std::string pick = i < 740 ? "ours" : "base";
      Verdict v;
      v.task_id = tasks[i].task_id;
      v.session_id = "s";
      v.judge = {Judge::Kind::kHuman, "r1"};
      v.choice = tasks[i].OnScreen(ScreenSide::kA).model == pick ? Choice::kA : Choice::kB;
      v.timestamp_ms = 1000 + static_cast<std::int64_t>(i);
      store.Record(v);
    }
    live = ComputePreferenceStats(tasks, *store.snapshot(), "ours", "base");
  }
  o.Check(live.pct_a == 74.0 && live.pct_b == 26.0 && live.n == 1000,
          fmt::format("740/1000 gave ({}, {})", live.pct_a, live.pct_b));
  VerdictStore replay(dir / "log.jsonl", tasks);
  const auto again = ComputePreferenceStats(tasks, *replay.snapshot(), "ours", "base");
  o.Check(again.pct_a == live.pct_a && again.pct_b == live.pct_b && again.n == live.n &&
              again.abstained == live.abstained,
          "replayed log gives different stats");
  if (o.pass) o.detail = "truth table exact, 740/1000 -> (74, 26), replay identical";
  return o;
}

// --- CLI determinism --------------------------------------------------------

struct CliRun {
  int status = -1;
  std::string out;
};

CliRun RunCli(const std::string& cli, const std::string& args) {
  CliRun r;
  FILE* p = ::popen(("'" + cli + "' " + args + " 2>&1").c_str(), "r");
  if (p == nullptr) return r;
  char buf[4096];
  std::size_t n = 0;
  while ((n = std::fread(buf, 1, sizeof(buf), p)) > 0) r.out.append(buf, n);
  const int raw = ::pclose(p);
  r.status = WIFEXITED(raw) ? WEXITSTATUS(raw) : -1;
  return r;
}

// Every regular file below `root`, keyed by relative path.
std::map<std::string, std::string> Tree(const std::filesystem::path& root) {
  std::map<std::string, std::string> out;
  if (!std::filesystem::exists(root)) return out;
  for (const auto& e : std::filesystem::recursive_directory_iterator(root)) {
    if (e.is_regular_file()) out[std::filesystem::relative(e.path(), root).string()] = testing::ReadFile(e.path());
  }
  return out;
}

std::string Q(const std::filesystem::path& p) { return "'" + p.string() + "'"; }

void WriteInputs(const std::filesystem::path& in) {
  std::mt19937_64 rng(8);
  std::vector<double> xs;
  for (int f = 0; f < 12; ++f) xs.push_back(3.0 + 0.2 * f);
  std::ofstream(in / "lateral.manifest") << [&] {
    std::ostringstream s;
    WriteNativeManifest(testing::LateralScene(xs), s);
    return s.str();
  }();
  std::vector<Track> gt, pred;
  for (int i = 0; i < 40; ++i) {
    const std::string id = "i" + std::to_string(i);
    const auto cat = i % 3 == 0 ? Category::kHuman : Category::kVehicle;
    Track g = testing::RunTrack(id, kGt, 25, UniformInt(rng, 1, 25), cat, "clip1");
    Track p = testing::RunTrack(id, kModel, 25, UniformInt(rng, 0, 25), cat, "clip1");
    for (Track* t : {&g, &p}) {
      for (auto& ob : t->observations) {
        if (!ob.present) continue;
        ob.centroid = Vec2{Uniform(rng, 0, 1600), Uniform(rng, 0, 900)};
        ob.mask_area = UniformInt(rng, 0, 50000);
      }
    }
    gt.push_back(std::move(g));
    pred.push_back(std::move(p));
  }
  std::ofstream g(in / "gt.trk"), p(in / "pred.trk");
  WriteTracks(gt, g);
  WriteTracks(pred, p);
  std::ofstream fa(in / "a.feat"), fb(in / "b.feat");
  WriteFeatures(Gaussian(rng, 8, 40, 0.0), fa);
  WriteFeatures(Gaussian(rng, 8, 40, 0.4), fb);
  for (int f = 0; f < 3; ++f) {
    Image img(96, 54, 3);
    for (auto& v : img.data()) v = UniformInt(rng, 0, 255);
    WritePnm(img, in / fmt::format("frame{}.ppm", f));
  }
  std::ofstream items(in / "items.txt");
  for (int i = 0; i < 25; ++i) items << "pair ours c" << i << " base c" << i << "\n";
  std::ofstream(in / "weights.json")
      << R"({"metrics": {"duration.fn_pct": {"weight": 1, "scale": 100}, "fid": {"weight": 1, "scale": 50}}})";
}

Outcome Determinism(const std::string& cli) {
  Outcome o;
  if (cli.empty() || !std::filesystem::exists(cli)) {
    o.Check(false, "sca_eval binary not given");
    return o;
  }
  testing::TempDir dir;
  const auto in = dir.path() / "in";
  std::filesystem::create_directories(in);
  WriteInputs(in);
  const std::string fx = Q(testing::FixtureDir() / "nuscenes_mini");
  // {out subdirectory, arguments with @ standing for that directory}
  const std::vector<std::string> commands = {
      "project --manifest " + fx + " --out @/p.csv --tracks-out @/gt.trk",
      "project --manifest " + Q(in / "lateral.manifest") + " --out @/p.json",
      "dyn-stats --manifest " + Q(in / "lateral.manifest") + " --out @/d.csv",
      "duration --gt " + Q(in / "gt.trk") + " --pred " + Q(in / "pred.trk") + " --tolerance 2 --out @/u.csv",
      "presence --gt " + Q(in / "gt.trk") + " --pred " + Q(in / "pred.trk") + " --out @/r.csv",
      "centroid --gt " + Q(in / "gt.trk") + " --pred " + Q(in / "pred.trk") + " --frame 3 --out @/c.csv",
      "mask-diff --gt " + Q(in / "gt.trk") + " --pred " + Q(in / "pred.trk") + " --out @/m.json",
      "preprocess " + Q(in / "frame0.ppm") + " " + Q(in / "frame1.ppm") + " " + Q(in / "frame2.ppm") +
          " --mode fvd --out-dir @/fvd",
      "preprocess " + Q(in / "frame0.ppm") + " --mode fid --out-dir @/fid",
      "frechet " + Q(in / "a.feat") + " " + Q(in / "b.feat") + " --out @/f.csv",
      "review-batch --items " + Q(in / "items.txt") + " --mode 2afc --out @/tasks.jsonl",
  };
  auto run_all = [&](int jobs, const std::filesystem::path& out) {
    std::string transcript;
    std::filesystem::create_directories(out);
    for (const auto& c : commands) {
      std::string args = c;
      for (std::size_t pos; (pos = args.find('@')) != std::string::npos;) args.replace(pos, 1, out.string());
      const auto r = RunCli(cli, fmt::format("--jobs {} --seed 42 {}", jobs, args));
      o.Check(r.status == 0, fmt::format("exit {} from: {}\n{}", r.status, c, r.out));
      // Output paths differ between runs; compare with them masked.
      std::string text = r.out;
      for (std::size_t pos; (pos = text.find(out.string())) != std::string::npos;) text.replace(pos, out.string().size(), "@");
      transcript += c + "\n" + text;
    }
    // Reports from the runs feed the aggregate commands.
    const auto score = RunCli(cli, fmt::format("--jobs {} score --report {} --report {} --weights {}", jobs,
                                               Q(out / "u.csv"), Q(out / "f.csv"), Q(in / "weights.json")));
    o.Check(score.status == 0, "score failed: " + score.out);
    transcript += score.out;
    const auto merged = RunCli(cli, fmt::format("--jobs {} report --in {} --in {} --out {}", jobs, Q(out / "u.csv"),
                                                Q(out / "c.csv"), Q(out / "all.csv")));
    o.Check(merged.status == 0, "report failed: " + merged.out);
    return transcript;
  };
  const std::string t1 = run_all(1, dir.path() / "j1");
  const std::string t1b = run_all(1, dir.path() / "j1b");
  const std::string t8 = run_all(8, dir.path() / "j8");
  o.Check(t1 == t1b, "stdout differs between repeated runs");
  o.Check(t1 == t8, "stdout differs between --jobs 1 and --jobs 8");
  // Merged reports record their inputs by path, which differ per run.
  auto strip = [](std::map<std::string, std::string> tree) {
    tree.erase("all.csv");
    return tree;
  };
  const auto f1 = strip(Tree(dir.path() / "j1"));
  o.Check(f1 == strip(Tree(dir.path() / "j1b")), "output files differ between repeated runs");
  o.Check(f1 == strip(Tree(dir.path() / "j8")), "output files differ between --jobs 1 and --jobs 8");
  o.Check(f1.size() >= 14, fmt::format("only {} output files", f1.size()));
  if (o.pass) o.detail = fmt::format("{} commands, {} files byte-identical across runs and --jobs 1/8",
                                     commands.size() + 2, f1.size());
  return o;
}

}  // namespace
}  // namespace scaeval

int main(int argc, char** argv) {
  using namespace scaeval;
  const std::string cli = argc > 1 ? argv[1] : "";
  const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria = {
      {"geometry-oracle", Geometry},
      {"displacement-synthetic", Displacement},
      {"duration-metrics", Duration},
      {"presence-curve", Presence},
      {"mask-diff", MaskDiff},
      {"crop-plan", CropSweep},
      {"frechet", Frechet},
      {"review-backbone", Review},
      {"determinism", [&] { return Determinism(cli); }},
  };
  int failed = 0;
  for (const auto& [name, run] : criteria) {
    Outcome o;
    try {
      o = run();
    } catch (const std::exception& e) {
      o.pass = false;
      o.detail = std::string("exception: ") + e.what();
    }
    if (!o.pass) ++failed;
    fmt::print("{} {}: {}\n", o.pass ? "PASS" : "FAIL", name, o.detail);
    std::fflush(stdout);
  }
  fmt::print("{} of {} criteria passed\n", criteria.size() - failed, criteria.size());
  return failed == 0 ? 0 : 1;
}
