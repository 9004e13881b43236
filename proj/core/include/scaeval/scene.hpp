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

#ifndef SCAEVAL_SCENE_HPP_
#define SCAEVAL_SCENE_HPP_

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "scaeval/category.hpp"
#include "scaeval/geometry.hpp"

namespace scaeval {

struct Rational {
  std::int64_t num = 2;
  std::int64_t den = 1;

  double value() const { return static_cast<double>(num) / static_cast<double>(den); }
  friend bool operator==(const Rational&, const Rational&) = default;
};

struct Annotation3D {
  std::string instance_id;
  Category category = Category::kOther;
  Box3D box;  // global frame

  friend bool operator==(const Annotation3D&, const Annotation3D&) = default;
};

struct FrameRecord {
  int frame_index = 0;
  std::int64_t timestamp_us = 0;
  Pose ego_pose;
  CameraCalib camera;
  std::vector<Annotation3D> annotations;

  friend bool operator==(const FrameRecord&, const FrameRecord&) = default;
};

struct SceneManifest {
  std::string scene_id;
  std::vector<FrameRecord> frames;  // strictly increasing timestamps
  int image_width = 0;
  int image_height = 0;
  Rational keyframe_rate;

  // instance id -> category, collected over all annotations.
  std::map<std::string, Category> instances() const;

  friend bool operator==(const SceneManifest&, const SceneManifest&) = default;
};

enum class ManifestFormat { kNative, kNuScenesTables };

struct ManifestLoadOptions {
  // nuScenes only: scene name or token to select when the tables hold more
  // than one scene.
  std::optional<std::string> scene;
  // nuScenes only: sensor channel whose key frames become manifest frames.
  std::string camera_channel = "CAM_FRONT";
};

// Native: a line-delimited text file. nuScenes: a directory holding the
// devkit JSON tables. Throws Error with kIoError, kMissingTable,
// kDanglingReference or kMalformedRecord.
SceneManifest LoadManifest(const std::filesystem::path& path,
                           ManifestFormat format,
                           const ManifestLoadOptions& options = {});

SceneManifest ParseNativeManifest(std::istream& in);
void WriteNativeManifest(const SceneManifest& manifest, std::ostream& out);

// Checks the structural invariants: positive image dims, unique frame
// indices, increasing timestamps, positive box sizes, unit quaternions,
// positive focal lengths. Throws kMalformedRecord.
void ValidateManifest(const SceneManifest& manifest);

}  // namespace scaeval

#endif  // SCAEVAL_SCENE_HPP_
