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

#ifndef SCAEVAL_TRACK_METRICS_HPP_
#define SCAEVAL_TRACK_METRICS_HPP_

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "scaeval/category.hpp"
#include "scaeval/projection.hpp"
#include "scaeval/scene.hpp"
#include "scaeval/tracks.hpp"

namespace scaeval {

// ---------------------------------------------------------------------------
// Displacement of actors over a fixed time window.

struct DisplacementStats {
  CategoryFilter category;
  double window_seconds = 0.0;
  int frame_step = 0;  // k = round(window * keyframe_rate)
  // Means are only defined when count > 0.
  std::optional<double> mean_dx_over_w;
  std::optional<double> mean_dy_over_h;
  std::optional<double> mean_dd_px;
  std::int64_t count = 0;
};

// Number of frames separating the two ends of a window. Throws
// kInvalidArgument when the window is not positive or rounds to zero frames.
int WindowFrames(double window_seconds, const Rational& rate);

// Core computation over centroid series. dx is normalized by image_width,
// dy by image_height, dd is kept in pixels.
DisplacementStats DisplacementFromSeries(std::span<const ActorCentroids> actors,
                                         int frame_step, int image_width,
                                         int image_height, CategoryFilter per);

// Projects the manifest's annotations and measures displacement between
// frames t and t + k. Throws kWindowTooLong when the manifest does not span
// k frames.
DisplacementStats ComputeDisplacementStats(const SceneManifest& manifest,
                                           double window_seconds,
                                           CategoryFilter per,
                                           const VisibilityOptions& options = {},
                                           int jobs = 1);

// ---------------------------------------------------------------------------
// Presence duration.

// Length of the presence run that starts at frame 0; 0 when absent at
// frame 0. Throws kEmptyInput for a track with no observations.
int AppearingLength(const Track& track);

struct DurationStats {
  double match_pct = 0.0;
  double fp_pct = 0.0;
  double fn_pct = 0.0;
  double precision = 0.0;  // percent
  double recall = 0.0;     // percent
  std::int64_t n_instances = 0;

  std::int64_t n_match = 0;
  std::int64_t n_fp = 0;
  std::int64_t n_fn = 0;
  std::int64_t tp_frames = 0;
  std::int64_t fp_frames = 0;
  std::int64_t fn_frames = 0;
};

// Only pairs whose ground truth is present at frame 0 are counted. Throws
// kEmptyInput when there are none, kInvalidArgument for negative tolerance.
DurationStats ComputeDurationStats(std::span<const TrackPair> pairs,
                                   int tolerance_frames = 0, int jobs = 1);

// ---------------------------------------------------------------------------
// Presence accuracy per frame.

struct PresenceCurve {
  // accuracy[k] in percent, nullopt where no ground truth is present.
  std::vector<std::optional<double>> accuracy;
  std::vector<std::int64_t> gt_present;
  std::vector<std::int64_t> matched;
};

PresenceCurve ComputePresenceCurve(std::span<const TrackPair> pairs, int clip_len,
                                   int jobs = 1);

// ---------------------------------------------------------------------------
// Centroid distance distribution.

struct HistogramSpec {
  int bins = 50;
  // Upper edge of the last regular bin. When unset, the given percentile
  // of the data (linear interpolation between order statistics) is used.
  std::optional<double> upper;
  double upper_percentile = 99.5;
};

struct Histogram {
  std::vector<double> edges;         // bins + 1 edges, edges[0] = 0
  std::vector<std::int64_t> counts;  // bins
  std::int64_t overflow = 0;         // values above edges.back()
};

// Linear-interpolated percentile, p in [0, 100].
double Percentile(std::span<const double> values, double p);

Histogram BuildHistogram(std::span<const double> values, const HistogramSpec& spec);

struct CentroidDistStats {
  int frame_index = 0;
  std::vector<double> distances;  // in pair order
  double mean = 0.0;
  double std = 0.0;  // population
  double outlier_threshold = 0.0;
  std::int64_t outlier_count = 0;  // distances strictly above threshold
  Histogram histogram;

  std::int64_t OutlierCount(double threshold) const;
};

// Considers pairs where both tracks are present with a centroid at
// `frame_index`. Throws kEmptyInput when there are none.
CentroidDistStats ComputeCentroidDistances(std::span<const TrackPair> pairs,
                                           int frame_index,
                                           const HistogramSpec& hist = {},
                                           double outlier_threshold = 100.0,
                                           int jobs = 1);

// Two-pass population mean and standard deviation. nullopt for empty input.
struct MeanStd {
  double mean = 0.0;
  double std = 0.0;
};
std::optional<MeanStd> PopulationMeanStd(std::span<const double> values);

}  // namespace scaeval

#endif  // SCAEVAL_TRACK_METRICS_HPP_
