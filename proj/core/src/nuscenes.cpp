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

// nuScenes devkit tables -> SceneManifest. Only the tables needed to place
// front-camera key frames are read; everything else in the directory is
// ignored.

#include <algorithm>
#include <fstream>
#include <map>
#include <set>

#include <nlohmann/json.hpp>

#include "scaeval/error.hpp"
#include "scaeval/scene.hpp"

namespace scaeval {

namespace {

using json = nlohmann::json;

struct Table {
  std::string name;
  std::vector<json> rows;
  std::map<std::string, const json*> by_token;
};

Table ReadTable(const std::filesystem::path& dir, const std::string& name, bool required) {
  Table t;
  t.name = name;
  const auto path = dir / (name + ".json");
  std::ifstream in(path);
  if (!in) {
    if (required) throw Error(ErrorCode::kMissingTable, name + " (" + path.string() + ")");
    return t;
  }
  json doc;
  try {
    in >> doc;
  } catch (const json::exception& e) {
    throw Error(ErrorCode::kMalformedRecord, name + ".json: " + e.what());
  }
  if (!doc.is_array()) throw Error(ErrorCode::kMalformedRecord, name + ".json: expected an array");
  t.rows = doc.get<std::vector<json>>();
  for (std::size_t i = 0; i < t.rows.size(); ++i) {
    const json& row = t.rows[i];
    if (!row.is_object() || !row.contains("token") || !row["token"].is_string()) {
      throw Error(ErrorCode::kMalformedRecord, name + "[" + std::to_string(i) + "]: missing token");
    }
    t.by_token[row["token"].get<std::string>()] = &row;
  }
  return t;
}

template <typename T>
T Field(const Table& t, const json& row, const char* key) {
  try {
    return row.at(key).get<T>();
  } catch (const json::exception&) {
    throw Error(ErrorCode::kMalformedRecord, t.name + " " + row.value("token", std::string("?")) +
                                                 ": bad or missing field '" + key + "'");
  }
}

const json& Resolve(const Table& t, const std::string& token) {
  auto it = t.by_token.find(token);
  if (it == t.by_token.end()) {
    throw Error(ErrorCode::kDanglingReference, t.name + " token " + token);
  }
  return *it->second;
}

Vec3 ToVec3(const Table& t, const json& row, const char* key) {
  const auto v = Field<std::vector<double>>(t, row, key);
  if (v.size() != 3) {
    throw Error(ErrorCode::kMalformedRecord, t.name + " " + Field<std::string>(t, row, "token") +
                                                 ": '" + key + "' needs 3 values");
  }
  return {v[0], v[1], v[2]};
}

Quaternion ToQuat(const Table& t, const json& row, const char* key) {
  const auto v = Field<std::vector<double>>(t, row, key);
  if (v.size() != 4) {
    throw Error(ErrorCode::kMalformedRecord, t.name + " " + Field<std::string>(t, row, "token") +
                                                 ": '" + key + "' needs 4 values");
  }
  const Quaternion q{v[0], v[1], v[2], v[3]};
  if (std::abs(q.norm() - 1.0) > 1e-3) {
    throw Error(ErrorCode::kMalformedRecord, t.name + " " + Field<std::string>(t, row, "token") +
                                                 ": '" + key + "' is not a rotation");
  }
  return std::abs(q.norm() - 1.0) > 1e-12 ? q.normalized() : q;
}

}  // namespace

SceneManifest LoadNuScenesTables(const std::filesystem::path& dir,
                                 const ManifestLoadOptions& options) {
  if (!std::filesystem::is_directory(dir)) {
    throw Error(ErrorCode::kIoError, dir.string() + " is not a directory");
  }
  const Table sample = ReadTable(dir, "sample", true);
  const Table sample_data = ReadTable(dir, "sample_data", true);
  const Table sample_annotation = ReadTable(dir, "sample_annotation", true);
  const Table ego_pose = ReadTable(dir, "ego_pose", true);
  const Table calibrated_sensor = ReadTable(dir, "calibrated_sensor", true);
  const Table sensor = ReadTable(dir, "sensor", true);
  const Table instance = ReadTable(dir, "instance", true);
  const Table category = ReadTable(dir, "category", true);
  const Table scene = ReadTable(dir, "scene", false);

  // Pick the scene.
  std::set<std::string> scene_tokens;
  for (const json& s : sample.rows) scene_tokens.insert(Field<std::string>(sample, s, "scene_token"));
  std::string scene_token;
  if (options.scene) {
    for (const std::string& tok : scene_tokens) {
      std::string name;
      if (auto it = scene.by_token.find(tok); it != scene.by_token.end()) {
        name = it->second->value("name", std::string());
      }
      if (tok == *options.scene || name == *options.scene) scene_token = tok;
    }
    if (scene_token.empty()) {
      throw Error(ErrorCode::kDanglingReference, "scene " + *options.scene);
    }
  } else {
    if (scene_tokens.size() != 1) {
      throw Error(ErrorCode::kInvalidArgument,
                  std::to_string(scene_tokens.size()) + " scenes in " + dir.string() +
                      "; select one by name or token");
    }
    scene_token = *scene_tokens.begin();
  }

  SceneManifest m;
  m.scene_id = scene_token;
  if (auto it = scene.by_token.find(scene_token); it != scene.by_token.end()) {
    m.scene_id = it->second->value("name", scene_token);
  }
  m.keyframe_rate = {2, 1};

  std::set<std::string> camera_sensors;
  for (const json& s : sensor.rows) {
    if (s.value("channel", std::string()) == options.camera_channel) {
      camera_sensors.insert(Field<std::string>(sensor, s, "token"));
    }
  }
  if (camera_sensors.empty()) {
    throw Error(ErrorCode::kDanglingReference, "sensor channel " + options.camera_channel);
  }

  // Key-frame camera record per sample.
  std::map<std::string, const json*> cam_data;
  for (const json& sd : sample_data.rows) {
    if (!sd.value("is_key_frame", false)) continue;
    const auto cs_token = Field<std::string>(sample_data, sd, "calibrated_sensor_token");
    const json& cs = Resolve(calibrated_sensor, cs_token);
    if (!camera_sensors.count(Field<std::string>(calibrated_sensor, cs, "sensor_token"))) continue;
    cam_data.emplace(Field<std::string>(sample_data, sd, "sample_token"), &sd);
  }

  std::map<std::string, std::vector<const json*>> anns_by_sample;
  for (const json& a : sample_annotation.rows) {
    anns_by_sample[Field<std::string>(sample_annotation, a, "sample_token")].push_back(&a);
  }

  std::vector<const json*> samples;
  for (const json& s : sample.rows) {
    if (Field<std::string>(sample, s, "scene_token") == scene_token) samples.push_back(&s);
  }
  std::stable_sort(samples.begin(), samples.end(), [&](const json* a, const json* b) {
    return Field<std::int64_t>(sample, *a, "timestamp") < Field<std::int64_t>(sample, *b, "timestamp");
  });

  for (std::size_t i = 0; i < samples.size(); ++i) {
    const json& s = *samples[i];
    const auto token = Field<std::string>(sample, s, "token");
    auto cd = cam_data.find(token);
    if (cd == cam_data.end()) {
      throw Error(ErrorCode::kDanglingReference,
                  "sample " + token + " has no " + options.camera_channel + " key frame");
    }
    const json& sd = *cd->second;
    const int w = Field<int>(sample_data, sd, "width");
    const int h = Field<int>(sample_data, sd, "height");
    if (i == 0) {
      m.image_width = w;
      m.image_height = h;
    } else if (w != m.image_width || h != m.image_height) {
      throw Error(ErrorCode::kMalformedRecord, "sample_data " + Field<std::string>(sample_data, sd, "token") +
                                                   ": image size changes within the scene");
    }

    FrameRecord f;
    f.frame_index = static_cast<int>(i);
    f.timestamp_us = Field<std::int64_t>(sample, s, "timestamp");
    const json& ep = Resolve(ego_pose, Field<std::string>(sample_data, sd, "ego_pose_token"));
    f.ego_pose = {ToVec3(ego_pose, ep, "translation"), ToQuat(ego_pose, ep, "rotation")};
    const json& cs =
        Resolve(calibrated_sensor, Field<std::string>(sample_data, sd, "calibrated_sensor_token"));
    f.camera.extrinsic = {ToVec3(calibrated_sensor, cs, "translation"),
                          ToQuat(calibrated_sensor, cs, "rotation")};
    const auto k = Field<std::vector<std::vector<double>>>(calibrated_sensor, cs, "camera_intrinsic");
    if (k.size() != 3 || k[0].size() != 3 || k[1].size() != 3) {
      throw Error(ErrorCode::kMalformedRecord,
                  "calibrated_sensor " + Field<std::string>(calibrated_sensor, cs, "token") +
                      ": camera_intrinsic must be 3x3");
    }
    f.camera.fx = k[0][0];
    f.camera.cx = k[0][2];
    f.camera.fy = k[1][1];
    f.camera.cy = k[1][2];

    for (const json* ap : anns_by_sample[token]) {
      const json& a = *ap;
      const auto inst_token = Field<std::string>(sample_annotation, a, "instance_token");
      const json& inst = Resolve(instance, inst_token);
      const json& cat = Resolve(category, Field<std::string>(instance, inst, "category_token"));
      Annotation3D ann;
      ann.instance_id = inst_token;
      ann.category = ParseCategory(Field<std::string>(category, cat, "name"));
      ann.box.center = ToVec3(sample_annotation, a, "translation");
      ann.box.size = ToVec3(sample_annotation, a, "size");
      ann.box.orientation = ToQuat(sample_annotation, a, "rotation");
      f.annotations.push_back(std::move(ann));
    }
    m.frames.push_back(std::move(f));
  }
  if (m.frames.empty()) throw Error(ErrorCode::kMissingTable, "scene " + m.scene_id + " has no samples");
  ValidateManifest(m);
  return m;
}

}  // namespace scaeval
