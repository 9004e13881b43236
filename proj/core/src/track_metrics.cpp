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

#include "scaeval/track_metrics.hpp"

#include <algorithm>
#include <cmath>

#include "scaeval/error.hpp"
#include "scaeval/parallel.hpp"

namespace scaeval {

int WindowFrames(double window_seconds, const Rational& rate) {
  if (!(window_seconds > 0.0)) {
    throw Error(ErrorCode::kInvalidArgument, "window must be positive");
  }
  const long long k = std::llround(window_seconds * static_cast<double>(rate.num) /
                                   static_cast<double>(rate.den));
  if (k < 1) {
    throw Error(ErrorCode::kInvalidArgument, "window shorter than one frame at the key-frame rate");
  }
  return static_cast<int>(k);
}

DisplacementStats DisplacementFromSeries(std::span<const ActorCentroids> actors, int frame_step,
                                         int image_width, int image_height, CategoryFilter per) {
  DisplacementStats s;
  s.category = per;
  s.frame_step = frame_step;
  double sum_dx = 0.0;
  double sum_dy = 0.0;
  double sum_dd = 0.0;
  for (const ActorCentroids& a : actors) {
    if (per && a.category != *per) continue;
    const int n = static_cast<int>(a.by_frame.size());
    for (int t = 0; t + frame_step < n; ++t) {
      const auto& p0 = a.by_frame[t];
      const auto& p1 = a.by_frame[t + frame_step];
      if (!p0 || !p1) continue;
      sum_dx += std::abs(p1->x - p0->x);
      sum_dy += std::abs(p1->y - p0->y);
      sum_dd += Distance(*p0, *p1);
      ++s.count;
    }
  }
  if (s.count > 0) {
    const double n = static_cast<double>(s.count);
    s.mean_dx_over_w = sum_dx / n / image_width;
    s.mean_dy_over_h = sum_dy / n / image_height;
    s.mean_dd_px = sum_dd / n;
  }
  return s;
}

DisplacementStats ComputeDisplacementStats(const SceneManifest& manifest, double window_seconds,
                                           CategoryFilter per, const VisibilityOptions& options,
                                           int jobs) {
  const int k = WindowFrames(window_seconds, manifest.keyframe_rate);
  if (static_cast<int>(manifest.frames.size()) <= k) {
    throw Error(ErrorCode::kWindowTooLong,
                "window of " + std::to_string(k) + " frames, scene " + manifest.scene_id + " has " +
                    std::to_string(manifest.frames.size()));
  }
  const auto series = CentroidSeries(manifest, options, jobs);
  DisplacementStats s =
      DisplacementFromSeries(series, k, manifest.image_width, manifest.image_height, per);
  s.window_seconds = window_seconds;
  return s;
}

int AppearingLength(const Track& track) {
  if (track.observations.empty()) {
    throw Error(ErrorCode::kEmptyInput, "track " + track.clip_id + "/" + track.instance_id +
                                            " has no observations");
  }
  const int limit = track.clip_length > 0 ? track.clip_length
                                          : track.observations.back().frame_index + 1;
  int n = 0;
  while (n < limit && track.present_at(n)) ++n;
  return n;
}

DurationStats ComputeDurationStats(std::span<const TrackPair> pairs, int tolerance_frames,
                                   int jobs) {
  if (tolerance_frames < 0) throw Error(ErrorCode::kInvalidArgument, "negative tolerance");
  const auto lengths = ParallelMap(pairs.size(), jobs, [&](std::size_t i) {
    return std::pair{AppearingLength(pairs[i].gt), AppearingLength(pairs[i].pred)};
  });

  DurationStats s;
  for (const auto& [l_gt, l_pred] : lengths) {
    if (l_gt <= 0) continue;
    ++s.n_instances;
    if (std::abs(l_pred - l_gt) <= tolerance_frames) {
      ++s.n_match;
    } else if (l_pred > l_gt) {
      ++s.n_fp;
    } else {
      ++s.n_fn;
    }
    s.tp_frames += std::min(l_gt, l_pred);
    s.fp_frames += std::max(0, l_pred - l_gt);
    s.fn_frames += std::max(0, l_gt - l_pred);
  }
  if (s.n_instances == 0) {
    throw Error(ErrorCode::kEmptyInput, "no pair has a ground-truth actor present at frame 0");
  }
  const double n = static_cast<double>(s.n_instances);
  s.match_pct = 100.0 * static_cast<double>(s.n_match) / n;
  s.fp_pct = 100.0 * static_cast<double>(s.n_fp) / n;
  s.fn_pct = 100.0 * static_cast<double>(s.n_fn) / n;
  const auto pct = [](std::int64_t num, std::int64_t den) {
    return den > 0 ? 100.0 * static_cast<double>(num) / static_cast<double>(den) : 0.0;
  };
  s.precision = pct(s.tp_frames, s.tp_frames + s.fp_frames);
  s.recall = pct(s.tp_frames, s.tp_frames + s.fn_frames);
  return s;
}

PresenceCurve ComputePresenceCurve(std::span<const TrackPair> pairs, int clip_len, int jobs) {
  if (clip_len < 1) throw Error(ErrorCode::kInvalidArgument, "clip length must be at least 1");
  const auto per_frame = ParallelMap(static_cast<std::size_t>(clip_len), jobs, [&](std::size_t k) {
    std::pair<std::int64_t, std::int64_t> c{0, 0};
    for (const TrackPair& p : pairs) {
      if (!p.gt.present_at(static_cast<int>(k))) continue;
      ++c.first;
      if (p.pred.present_at(static_cast<int>(k))) ++c.second;
    }
    return c;
  });
  PresenceCurve curve;
  for (const auto& [gt, matched] : per_frame) {
    curve.gt_present.push_back(gt);
    curve.matched.push_back(matched);
    curve.accuracy.push_back(gt > 0 ? std::optional<double>(100.0 * static_cast<double>(matched) /
                                                            static_cast<double>(gt))
                                    : std::nullopt);
  }
  return curve;
}

std::optional<MeanStd> PopulationMeanStd(std::span<const double> values) {
  if (values.empty()) return std::nullopt;
  double sum = 0.0;
  for (double v : values) sum += v;
  const double mean = sum / static_cast<double>(values.size());
  double ss = 0.0;
  for (double v : values) ss += (v - mean) * (v - mean);
  return MeanStd{mean, std::sqrt(ss / static_cast<double>(values.size()))};
}

double Percentile(std::span<const double> values, double p) {
  if (values.empty()) throw Error(ErrorCode::kEmptyInput, "percentile of an empty set");
  std::vector<double> sorted(values.begin(), values.end());
  std::sort(sorted.begin(), sorted.end());
  const double pos = std::clamp(p, 0.0, 100.0) / 100.0 * static_cast<double>(sorted.size() - 1);
  const auto lo = static_cast<std::size_t>(std::floor(pos));
  const std::size_t hi = std::min(lo + 1, sorted.size() - 1);
  const double frac = pos - static_cast<double>(lo);
  return sorted[lo] + frac * (sorted[hi] - sorted[lo]);
}

Histogram BuildHistogram(std::span<const double> values, const HistogramSpec& spec) {
  if (spec.bins < 1) throw Error(ErrorCode::kInvalidArgument, "histogram needs at least one bin");
  double upper = spec.upper ? *spec.upper
                            : (values.empty() ? 0.0 : Percentile(values, spec.upper_percentile));
  if (!(upper > 0.0)) upper = 1.0;  // all-zero data: keep a usable range

  Histogram h;
  h.edges.resize(spec.bins + 1);
  for (int i = 0; i <= spec.bins; ++i) h.edges[i] = upper * i / spec.bins;
  h.counts.assign(spec.bins, 0);
  for (double v : values) {
    if (v > upper) {
      ++h.overflow;
      continue;
    }
    auto bin = static_cast<int>(std::floor(v / upper * spec.bins));
    bin = std::clamp(bin, 0, spec.bins - 1);
    ++h.counts[bin];
  }
  return h;
}

std::int64_t CentroidDistStats::OutlierCount(double threshold) const {
  return std::count_if(distances.begin(), distances.end(),
                       [threshold](double d) { return d > threshold; });
}

CentroidDistStats ComputeCentroidDistances(std::span<const TrackPair> pairs, int frame_index,
                                           const HistogramSpec& hist, double outlier_threshold,
                                           int jobs) {
  const auto per_pair = ParallelMap(pairs.size(), jobs, [&](std::size_t i) -> std::optional<double> {
    const TrackObservation* g = pairs[i].gt.at(frame_index);
    const TrackObservation* p = pairs[i].pred.at(frame_index);
    if (!g || !p || !g->present || !p->present || !g->centroid || !p->centroid) return std::nullopt;
    return Distance(*g->centroid, *p->centroid);
  });
  CentroidDistStats s;
  s.frame_index = frame_index;
  for (const auto& d : per_pair) {
    if (d) s.distances.push_back(*d);
  }
  if (s.distances.empty()) {
    throw Error(ErrorCode::kEmptyInput,
                "no pair is co-present with centroids at frame " + std::to_string(frame_index));
  }
  const MeanStd ms = *PopulationMeanStd(s.distances);
  s.mean = ms.mean;
  s.std = ms.std;
  s.outlier_threshold = outlier_threshold;
  s.outlier_count = s.OutlierCount(outlier_threshold);
  s.histogram = BuildHistogram(s.distances, hist);
  return s;
}

}  // namespace scaeval
