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

#ifndef SCAEVAL_TRACKS_HPP_
#define SCAEVAL_TRACKS_HPP_

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "scaeval/category.hpp"
#include "scaeval/geometry.hpp"
#include "scaeval/rle.hpp"

namespace scaeval {

// Either the ground truth or the output of a named model. Serialized as
// "gt" or as the model name.
struct TrackSource {
  std::optional<std::string> model;  // nullopt = ground truth

  static TrackSource GroundTruth() { return {}; }
  static TrackSource Model(std::string name) { return {std::move(name)}; }
  static TrackSource Parse(const std::string& token);

  bool is_ground_truth() const { return !model.has_value(); }
  std::string token() const { return model.value_or("gt"); }

  friend bool operator==(const TrackSource&, const TrackSource&) = default;
};

struct TrackObservation {
  int frame_index = 0;
  bool present = false;
  std::optional<Vec2> centroid;
  std::optional<std::int64_t> mask_area;
  std::optional<RleMask> mask;

  // mask_area when given, otherwise the population count of `mask`.
  std::optional<std::int64_t> area() const;

  friend bool operator==(const TrackObservation&, const TrackObservation&) = default;
};

struct Track {
  std::string clip_id;
  TrackSource source;
  std::string instance_id;
  Category category = Category::kOther;
  int clip_length = 0;  // frames; identical for every track of a clip
  std::vector<TrackObservation> observations;  // sorted by frame_index

  // Frames without an observation count as absent.
  const TrackObservation* at(int frame_index) const;
  bool present_at(int frame_index) const;

  friend bool operator==(const Track&, const Track&) = default;
};

// Track file: one record per line,
//   obs <clip> <source> <instance> <category> <frame> <0|1> [cx cy area [rle]]
// plus optional `clip <clip> <frames>` lines declaring clip length. Without a
// declaration the clip length is one past the largest frame index seen for
// that clip. `#` starts a comment line.
//
// Throws kDuplicateObservation, kInconsistentClipLength, kMalformedRecord,
// kIoError.
std::vector<Track> LoadTracks(const std::filesystem::path& path);
std::vector<Track> ParseTracks(std::istream& in);
void WriteTracks(const std::vector<Track>& tracks, std::ostream& out);

// A ground-truth track and the matching prediction (possibly synthetic).
struct TrackPair {
  Track gt;
  Track pred;
  bool pred_synthetic = false;  // true when no prediction existed
};

struct Pairing {
  std::vector<TrackPair> pairs;      // sorted by (clip_id, instance_id)
  std::vector<Track> unmatched_pred; // sorted by (clip_id, instance_id)
};

// Matches by (clip_id, instance_id). A ground-truth instance without a
// prediction is paired with an all-absent track spanning the clip.
Pairing PairTracks(const std::vector<Track>& gt, const std::vector<Track>& pred);

Track AllAbsentTrack(const Track& like, const TrackSource& source);

}  // namespace scaeval

#endif  // SCAEVAL_TRACKS_HPP_
