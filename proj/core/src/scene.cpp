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

#include "scaeval/scene.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <map>
#include <ostream>
#include <set>
#include <sstream>

#include "scaeval/error.hpp"
#include "text_util.hpp"

namespace scaeval {

SceneManifest LoadNuScenesTables(const std::filesystem::path& dir,
                                 const ManifestLoadOptions& options);

namespace {

using internal::SplitWs;

[[noreturn]] void Malformed(int line_no, const std::string& why) {
  throw Error(ErrorCode::kMalformedRecord, "line " + std::to_string(line_no) + ": " + why);
}

double Num(std::string_view tok, int line_no) {
  const auto v = internal::ToDouble(tok);
  if (!v || !std::isfinite(*v)) Malformed(line_no, "expected a number, got '" + std::string(tok) + "'");
  return *v;
}

template <typename Int>
Int Integer(std::string_view tok, int line_no) {
  const auto v = internal::ToInt<Int>(tok);
  if (!v) Malformed(line_no, "expected an integer, got '" + std::string(tok) + "'");
  return *v;
}

// Quaternions written by hand rarely have unit norm to 1e-9; renormalize
// small deviations, reject anything that is not a rotation.
Quaternion UnitQuaternion(const Quaternion& q, int line_no) {
  const double n = q.norm();
  if (!(std::abs(n - 1.0) <= 1e-3)) {
    Malformed(line_no, "quaternion norm " + internal::ShortestDouble(n) + " is not 1");
  }
  return std::abs(n - 1.0) > 1e-12 ? q.normalized() : q;
}

Pose ParsePose(const std::vector<std::string_view>& t, std::size_t at, int line_no) {
  Pose p;
  p.translation = {Num(t[at], line_no), Num(t[at + 1], line_no), Num(t[at + 2], line_no)};
  p.rotation = UnitQuaternion({Num(t[at + 3], line_no), Num(t[at + 4], line_no),
                               Num(t[at + 5], line_no), Num(t[at + 6], line_no)},
                              line_no);
  return p;
}

}  // namespace

std::map<std::string, Category> SceneManifest::instances() const {
  std::map<std::string, Category> out;
  for (const FrameRecord& f : frames) {
    for (const Annotation3D& a : f.annotations) out.emplace(a.instance_id, a.category);
  }
  return out;
}

SceneManifest ParseNativeManifest(std::istream& in) {
  SceneManifest m;
  bool have_scene = false;
  std::map<int, std::pair<FrameRecord, int>> frames;  // idx -> (record, line)
  std::map<int, std::pair<Pose, int>> egos;
  std::map<int, std::pair<CameraCalib, int>> cams;
  std::vector<std::tuple<int, Annotation3D, int>> anns;

  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (internal::IsSkippable(line)) continue;
    const auto t = SplitWs(line);
    const std::string_view kind = t[0];
    auto expect = [&](std::size_t n) {
      if (t.size() != n) {
        Malformed(line_no, "'" + std::string(kind) + "' record takes " + std::to_string(n - 1) +
                               " fields, got " + std::to_string(t.size() - 1));
      }
    };
    if (kind == "scene") {
      expect(5);
      if (have_scene) Malformed(line_no, "second scene header");
      have_scene = true;
      m.scene_id = std::string(t[1]);
      m.image_width = Integer<int>(t[2], line_no);
      m.image_height = Integer<int>(t[3], line_no);
      const std::string_view fps = t[4];
      const auto slash = fps.find('/');
      if (slash == std::string_view::npos) Malformed(line_no, "frame rate must be num/den");
      m.keyframe_rate = {Integer<std::int64_t>(fps.substr(0, slash), line_no),
                         Integer<std::int64_t>(fps.substr(slash + 1), line_no)};
      if (m.image_width <= 0 || m.image_height <= 0) Malformed(line_no, "image size must be positive");
      if (m.keyframe_rate.num <= 0 || m.keyframe_rate.den <= 0) {
        Malformed(line_no, "frame rate must be positive");
      }
    } else if (kind == "frame") {
      expect(3);
      FrameRecord f;
      f.frame_index = Integer<int>(t[1], line_no);
      f.timestamp_us = Integer<std::int64_t>(t[2], line_no);
      if (f.frame_index < 0) Malformed(line_no, "negative frame index");
      if (!frames.emplace(f.frame_index, std::pair{f, line_no}).second) {
        Malformed(line_no, "duplicate frame " + std::to_string(f.frame_index));
      }
    } else if (kind == "ego") {
      expect(9);
      const int idx = Integer<int>(t[1], line_no);
      if (!egos.emplace(idx, std::pair{ParsePose(t, 2, line_no), line_no}).second) {
        Malformed(line_no, "second ego pose for frame " + std::to_string(idx));
      }
    } else if (kind == "cam") {
      expect(13);
      const int idx = Integer<int>(t[1], line_no);
      CameraCalib c;
      c.extrinsic = ParsePose(t, 2, line_no);
      c.fx = Num(t[9], line_no);
      c.fy = Num(t[10], line_no);
      c.cx = Num(t[11], line_no);
      c.cy = Num(t[12], line_no);
      if (!(c.fx > 0 && c.fy > 0)) Malformed(line_no, "focal lengths must be positive");
      if (!cams.emplace(idx, std::pair{c, line_no}).second) {
        Malformed(line_no, "second camera calibration for frame " + std::to_string(idx));
      }
    } else if (kind == "ann") {
      expect(14);
      const int idx = Integer<int>(t[1], line_no);
      Annotation3D a;
      a.instance_id = std::string(t[2]);
      a.category = ParseCategory(t[3]);
      a.box.center = {Num(t[4], line_no), Num(t[5], line_no), Num(t[6], line_no)};
      a.box.size = {Num(t[7], line_no), Num(t[8], line_no), Num(t[9], line_no)};
      if (!(a.box.size.x > 0 && a.box.size.y > 0 && a.box.size.z > 0)) {
        Malformed(line_no, "box size must be positive");
      }
      a.box.orientation = UnitQuaternion(
          {Num(t[10], line_no), Num(t[11], line_no), Num(t[12], line_no), Num(t[13], line_no)},
          line_no);
      anns.emplace_back(idx, std::move(a), line_no);
    } else {
      Malformed(line_no, "unknown record '" + std::string(kind) + "'");
    }
  }

  if (!have_scene) throw Error(ErrorCode::kMissingTable, "no 'scene' header record");

  auto dangling = [](int idx, int at) {
    throw Error(ErrorCode::kDanglingReference,
                "frame " + std::to_string(idx) + " (line " + std::to_string(at) + ")");
  };
  for (const auto& [idx, v] : egos) {
    if (!frames.count(idx)) dangling(idx, v.second);
  }
  for (const auto& [idx, v] : cams) {
    if (!frames.count(idx)) dangling(idx, v.second);
  }
  std::map<std::string, Category> instance_category;
  for (auto& [idx, ann, at] : anns) {
    auto it = frames.find(idx);
    if (it == frames.end()) dangling(idx, at);
    auto [cat_it, inserted] = instance_category.emplace(ann.instance_id, ann.category);
    if (!inserted && cat_it->second != ann.category) {
      Malformed(at, "instance " + ann.instance_id + " changes category");
    }
    it->second.first.annotations.push_back(std::move(ann));
  }
  for (auto& [idx, v] : frames) {
    auto e = egos.find(idx);
    if (e == egos.end()) Malformed(v.second, "frame " + std::to_string(idx) + " has no ego pose");
    auto c = cams.find(idx);
    if (c == cams.end()) {
      Malformed(v.second, "frame " + std::to_string(idx) + " has no camera calibration");
    }
    v.first.ego_pose = e->second.first;
    v.first.camera = c->second.first;
    m.frames.push_back(std::move(v.first));
  }
  std::stable_sort(m.frames.begin(), m.frames.end(),
                   [](const FrameRecord& a, const FrameRecord& b) {
                     return a.timestamp_us < b.timestamp_us;
                   });
  for (std::size_t i = 1; i < m.frames.size(); ++i) {
    if (m.frames[i].timestamp_us == m.frames[i - 1].timestamp_us) {
      Malformed(frames.at(m.frames[i].frame_index).second,
                "timestamp repeats an earlier frame");
    }
  }
  return m;
}

void WriteNativeManifest(const SceneManifest& m, std::ostream& out) {
  using internal::ShortestDouble;
  auto pose = [&](const Pose& p) {
    out << ' ' << ShortestDouble(p.translation.x) << ' ' << ShortestDouble(p.translation.y) << ' '
        << ShortestDouble(p.translation.z) << ' ' << ShortestDouble(p.rotation.w) << ' '
        << ShortestDouble(p.rotation.x) << ' ' << ShortestDouble(p.rotation.y) << ' '
        << ShortestDouble(p.rotation.z);
  };
  out << "scene " << m.scene_id << ' ' << m.image_width << ' ' << m.image_height << ' '
      << m.keyframe_rate.num << '/' << m.keyframe_rate.den << '\n';
  for (const FrameRecord& f : m.frames) {
    out << "frame " << f.frame_index << ' ' << f.timestamp_us << '\n';
    out << "ego " << f.frame_index;
    pose(f.ego_pose);
    out << '\n';
    out << "cam " << f.frame_index;
    pose(f.camera.extrinsic);
    out << ' ' << ShortestDouble(f.camera.fx) << ' ' << ShortestDouble(f.camera.fy) << ' '
        << ShortestDouble(f.camera.cx) << ' ' << ShortestDouble(f.camera.cy) << '\n';
    for (const Annotation3D& a : f.annotations) {
      const Box3D& b = a.box;
      out << "ann " << f.frame_index << ' ' << a.instance_id << ' ' << CategoryName(a.category)
          << ' ' << ShortestDouble(b.center.x) << ' ' << ShortestDouble(b.center.y) << ' '
          << ShortestDouble(b.center.z) << ' ' << ShortestDouble(b.size.x) << ' '
          << ShortestDouble(b.size.y) << ' ' << ShortestDouble(b.size.z) << ' '
          << ShortestDouble(b.orientation.w) << ' ' << ShortestDouble(b.orientation.x) << ' '
          << ShortestDouble(b.orientation.y) << ' ' << ShortestDouble(b.orientation.z) << '\n';
    }
  }
}

void ValidateManifest(const SceneManifest& m) {
  auto fail = [](const std::string& why) { throw Error(ErrorCode::kMalformedRecord, why); };
  if (m.image_width <= 0 || m.image_height <= 0) fail("image size must be positive");
  if (m.keyframe_rate.num <= 0 || m.keyframe_rate.den <= 0) fail("frame rate must be positive");
  std::set<int> seen;
  for (std::size_t i = 0; i < m.frames.size(); ++i) {
    const FrameRecord& f = m.frames[i];
    const std::string where = "frame " + std::to_string(f.frame_index);
    if (f.frame_index < 0 || !seen.insert(f.frame_index).second) fail(where + ": bad or repeated index");
    if (i > 0 && f.timestamp_us <= m.frames[i - 1].timestamp_us) fail(where + ": timestamps not increasing");
    if (!(f.camera.fx > 0 && f.camera.fy > 0)) fail(where + ": focal lengths must be positive");
    for (const Quaternion* q : {&f.ego_pose.rotation, &f.camera.extrinsic.rotation}) {
      if (std::abs(q->norm() - 1.0) > 1e-9) fail(where + ": rotation is not unit");
    }
    for (const Annotation3D& a : f.annotations) {
      if (!(a.box.size.x > 0 && a.box.size.y > 0 && a.box.size.z > 0)) {
        fail(where + ", " + a.instance_id + ": box size must be positive");
      }
      if (std::abs(a.box.orientation.norm() - 1.0) > 1e-9) {
        fail(where + ", " + a.instance_id + ": orientation is not unit");
      }
    }
  }
}

SceneManifest LoadManifest(const std::filesystem::path& path, ManifestFormat format,
                           const ManifestLoadOptions& options) {
  if (format == ManifestFormat::kNuScenesTables) return LoadNuScenesTables(path, options);
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::kIoError, "cannot read " + path.string());
  SceneManifest m = ParseNativeManifest(in);
  ValidateManifest(m);
  return m;
}

}  // namespace scaeval
