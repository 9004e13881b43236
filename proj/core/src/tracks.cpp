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

#include "scaeval/tracks.hpp"

#include <algorithm>
#include <fstream>
#include <map>
#include <ostream>
#include <set>
#include <tuple>

#include "scaeval/error.hpp"
#include "text_util.hpp"

namespace scaeval {

namespace {

[[noreturn]] void Malformed(int line_no, const std::string& why) {
  throw Error(ErrorCode::kMalformedRecord, "line " + std::to_string(line_no) + ": " + why);
}

using TrackKey = std::tuple<std::string, std::string, std::string>;  // clip, source, instance

bool ByClipInstance(const Track& a, const Track& b) {
  return std::tie(a.clip_id, a.instance_id, a.source.model) <
         std::tie(b.clip_id, b.instance_id, b.source.model);
}

}  // namespace

TrackSource TrackSource::Parse(const std::string& token) {
  if (token == "gt") return GroundTruth();
  return Model(token);
}

std::optional<std::int64_t> TrackObservation::area() const {
  if (mask_area) return mask_area;
  if (mask) return static_cast<std::int64_t>(MaskArea(*mask));
  return std::nullopt;
}

const TrackObservation* Track::at(int frame_index) const {
  auto it = std::lower_bound(
      observations.begin(), observations.end(), frame_index,
      [](const TrackObservation& o, int f) { return o.frame_index < f; });
  if (it == observations.end() || it->frame_index != frame_index) return nullptr;
  return &*it;
}

bool Track::present_at(int frame_index) const {
  const TrackObservation* o = at(frame_index);
  return o != nullptr && o->present;
}

std::vector<Track> ParseTracks(std::istream& in) {
  std::map<TrackKey, Track> tracks;
  std::map<std::string, std::pair<int, int>> declared;  // clip -> (length, line)
  std::map<std::string, int> max_frame;

  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (internal::IsSkippable(line)) continue;
    const auto t = internal::SplitWs(line);
    if (t[0] == "clip") {
      if (t.size() != 3) Malformed(line_no, "'clip' record takes <clip> <frames>");
      const auto n = internal::ToInt<int>(t[2]);
      if (!n || *n <= 0) Malformed(line_no, "clip length must be a positive integer");
      const std::string clip(t[1]);
      auto [it, inserted] = declared.emplace(clip, std::pair{*n, line_no});
      if (!inserted && it->second.first != *n) {
        throw Error(ErrorCode::kInconsistentClipLength,
                    "clip " + clip + " declared with " + std::to_string(it->second.first) +
                        " and " + std::to_string(*n) + " frames (line " + std::to_string(line_no) + ")");
      }
      continue;
    }
    if (t[0] != "obs") Malformed(line_no, "unknown record '" + std::string(t[0]) + "'");
    if (t.size() != 7 && t.size() != 10 && t.size() != 11) {
      Malformed(line_no, "'obs' record takes 6, 9 or 10 fields");
    }
    TrackObservation o;
    const auto frame = internal::ToInt<int>(t[5]);
    if (!frame || *frame < 0) Malformed(line_no, "bad frame index");
    o.frame_index = *frame;
    if (t[6] != "0" && t[6] != "1") Malformed(line_no, "present flag must be 0 or 1");
    o.present = t[6] == "1";
    if (t.size() >= 10) {
      if (!o.present) Malformed(line_no, "absent observation carries centroid/area");
      const auto cx = internal::ToDouble(t[7]);
      const auto cy = internal::ToDouble(t[8]);
      const auto area = internal::ToInt<std::int64_t>(t[9]);
      if (!cx || !cy) Malformed(line_no, "bad centroid");
      if (!area || *area < 0) Malformed(line_no, "bad mask area");
      o.centroid = Vec2{*cx, *cy};
      o.mask_area = *area;
      if (t.size() == 11) {
        try {
          o.mask = ParseRle(t[10]);
        } catch (const Error& e) {
          throw Error(ErrorCode::kMalformedRle, "line " + std::to_string(line_no) + ": " + e.detail());
        }
        if (static_cast<std::int64_t>(MaskArea(*o.mask)) != *area) {
          Malformed(line_no, "mask area disagrees with the encoded mask");
        }
      }
    }

    const std::string clip(t[1]);
    const std::string source(t[2]);
    const std::string instance(t[3]);
    auto [it, inserted] = tracks.try_emplace(TrackKey{clip, source, instance});
    Track& track = it->second;
    if (inserted) {
      track.clip_id = clip;
      track.source = TrackSource::Parse(source);
      track.instance_id = instance;
      track.category = ParseCategory(t[4]);
    } else if (track.category != ParseCategory(t[4])) {
      Malformed(line_no, "instance " + instance + " changes category");
    }
    if (track.at(o.frame_index) != nullptr) {
      throw Error(ErrorCode::kDuplicateObservation,
                  clip + "/" + instance + " frame " + std::to_string(o.frame_index) + " (line " +
                      std::to_string(line_no) + ")");
    }
    auto pos = std::upper_bound(track.observations.begin(), track.observations.end(), o.frame_index,
                                [](int f, const TrackObservation& x) { return f < x.frame_index; });
    track.observations.insert(pos, std::move(o));
    auto& mf = max_frame[clip];
    mf = std::max(mf, *frame);
  }

  std::vector<Track> out;
  out.reserve(tracks.size());
  for (auto& [key, track] : tracks) {
    const int observed = max_frame[track.clip_id] + 1;
    int length = observed;
    if (auto d = declared.find(track.clip_id); d != declared.end()) {
      length = d->second.first;
      if (observed > length) {
        throw Error(ErrorCode::kInconsistentClipLength,
                    "clip " + track.clip_id + " declared with " + std::to_string(length) +
                        " frames but has an observation at frame " + std::to_string(observed - 1));
      }
    }
    track.clip_length = length;
    out.push_back(std::move(track));
  }
  std::sort(out.begin(), out.end(), ByClipInstance);
  return out;
}

std::vector<Track> LoadTracks(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::kIoError, "cannot read " + path.string());
  return ParseTracks(in);
}

void WriteTracks(const std::vector<Track>& tracks, std::ostream& out) {
  std::map<std::string, int> lengths;
  for (const Track& t : tracks) {
    auto [it, inserted] = lengths.emplace(t.clip_id, t.clip_length);
    if (!inserted && it->second != t.clip_length) {
      throw Error(ErrorCode::kInconsistentClipLength, "clip " + t.clip_id);
    }
  }
  for (const auto& [clip, n] : lengths) out << "clip " << clip << ' ' << n << '\n';
  for (const Track& t : tracks) {
    for (const TrackObservation& o : t.observations) {
      out << "obs " << t.clip_id << ' ' << t.source.token() << ' ' << t.instance_id << ' '
          << CategoryName(t.category) << ' ' << o.frame_index << ' ' << (o.present ? 1 : 0);
      if (o.present && o.centroid) {
        out << ' ' << internal::ShortestDouble(o.centroid->x) << ' '
            << internal::ShortestDouble(o.centroid->y) << ' ' << o.area().value_or(0);
        if (o.mask) out << ' ' << FormatRle(*o.mask);
      }
      out << '\n';
    }
  }
}

Track AllAbsentTrack(const Track& like, const TrackSource& source) {
  Track t;
  t.clip_id = like.clip_id;
  t.source = source;
  t.instance_id = like.instance_id;
  t.category = like.category;
  t.clip_length = like.clip_length;
  t.observations.reserve(like.clip_length);
  for (int f = 0; f < like.clip_length; ++f) {
    TrackObservation obs;
    obs.frame_index = f;
    t.observations.push_back(std::move(obs));
  }
  return t;
}

Pairing PairTracks(const std::vector<Track>& gt, const std::vector<Track>& pred) {
  using Key = std::pair<std::string, std::string>;
  std::map<Key, const Track*> gt_by_key;
  for (const Track& t : gt) gt_by_key.emplace(Key{t.clip_id, t.instance_id}, &t);
  std::map<Key, const Track*> pred_by_key;
  std::set<std::string> models;
  for (const Track& t : pred) {
    auto [it, inserted] = pred_by_key.emplace(Key{t.clip_id, t.instance_id}, &t);
    if (!inserted && t.source.token() < it->second->source.token()) it->second = &t;
    if (t.source.model) models.insert(*t.source.model);
  }
  // Stand-ins are attributed to the (lexicographically first) model of the
  // prediction set so the pairing does not depend on input order.
  const TrackSource missing_source =
      TrackSource::Model(models.empty() ? std::string("missing") : *models.begin());

  Pairing out;
  for (const auto& [key, g] : gt_by_key) {
    TrackPair p;
    p.gt = *g;
    if (auto it = pred_by_key.find(key); it != pred_by_key.end()) {
      p.pred = *it->second;
    } else {
      p.pred = AllAbsentTrack(*g, missing_source);
      p.pred_synthetic = true;
    }
    out.pairs.push_back(std::move(p));
  }
  for (const auto& [key, t] : pred_by_key) {
    if (!gt_by_key.count(key)) out.unmatched_pred.push_back(*t);
  }
  return out;
}

}  // namespace scaeval
