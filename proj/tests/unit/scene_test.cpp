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

#include <sstream>

#include <gtest/gtest.h>

#include "scaeval/error.hpp"
#include "scaeval/projection.hpp"
#include "scaeval/scene.hpp"
#include "test_util.hpp"

namespace scaeval {
namespace {

using testing::FixtureDir;
using testing::TempDir;

constexpr char kTwoFrames[] = R"(scene s1 1600 900 2/1
frame 0 1000
ego 0 0 0 0 1 0 0 0
cam 0 0 0 0 1 0 0 0 1000 1000 800 450
ann 0 ped human.pedestrian.adult 0 0 20 0.6 0.8 1.7 1 0 0 0
frame 1 500001
ego 1 0 0 0 1 0 0 0
cam 1 0 0 0 1 0 0 0 1000 1000 800 450
ann 1 ped human.pedestrian.adult 2 0 20 0.6 0.8 1.7 1 0 0 0
)";

ErrorCode ParseCode(const std::string& text) {
  std::istringstream in(text);
  try {
    ParseNativeManifest(in);
  } catch (const Error& e) {
    return e.code();
  }
  ADD_FAILURE() << "parsed without error:\n" << text;
  return ErrorCode::kInvalidArgument;
}

TEST(NativeManifest, Parses) {
  std::istringstream in(kTwoFrames);
  const SceneManifest m = ParseNativeManifest(in);
  EXPECT_EQ(m.scene_id, "s1");
  EXPECT_EQ(m.image_width, 1600);
  EXPECT_EQ(m.keyframe_rate, (Rational{2, 1}));
  ASSERT_EQ(m.frames.size(), 2u);
  EXPECT_EQ(m.frames[1].annotations.at(0).category, Category::kHuman);
  EXPECT_DOUBLE_EQ(m.frames[1].annotations.at(0).box.center.x, 2.0);
  EXPECT_EQ(m.instances().size(), 1u);
}

TEST(NativeManifest, WriteRoundTrip) {
  std::istringstream in(kTwoFrames);
  const SceneManifest m = ParseNativeManifest(in);
  std::ostringstream out;
  WriteNativeManifest(m, out);
  std::istringstream again(out.str());
  EXPECT_EQ(ParseNativeManifest(again), m);
}

TEST(NativeManifest, MissingHeader) {
  EXPECT_EQ(ParseCode("frame 0 0\n"), ErrorCode::kMissingTable);
}

TEST(NativeManifest, DanglingFrameReference) {
  std::string text = kTwoFrames;
  text += "ann 7 ped human 0 0 20 1 1 1 1 0 0 0\n";
  EXPECT_EQ(ParseCode(text), ErrorCode::kDanglingReference);
}

TEST(NativeManifest, MalformedRecords) {
  const std::string header = "scene s 10 10 2/1\n";
  EXPECT_EQ(ParseCode(header + "frame 0\n"), ErrorCode::kMalformedRecord);
  EXPECT_EQ(ParseCode(header + "bogus 1 2\n"), ErrorCode::kMalformedRecord);
  EXPECT_EQ(ParseCode("scene s 0 10 2/1\n"), ErrorCode::kMalformedRecord);
  EXPECT_EQ(ParseCode("scene s 10 10 2\n"), ErrorCode::kMalformedRecord);
  // Quaternion far from unit norm.
  std::string bad_q = kTwoFrames;
  bad_q += "ann 0 car vehicle.car 0 0 30 2 4 1.5 2 0 0 0\n";
  EXPECT_EQ(ParseCode(bad_q), ErrorCode::kMalformedRecord);
  // Non-positive box size.
  std::string bad_size = kTwoFrames;
  bad_size += "ann 0 car vehicle.car 0 0 30 0 4 1.5 1 0 0 0\n";
  EXPECT_EQ(ParseCode(bad_size), ErrorCode::kMalformedRecord);
}

TEST(NativeManifest, CategoryChangeIsMalformed) {
  std::string text = kTwoFrames;
  text += "ann 1 ped vehicle.car 0 0 25 1 1 1 1 0 0 0\n";
  EXPECT_EQ(ParseCode(text), ErrorCode::kMalformedRecord);
}

TEST(NativeManifest, SlightlyDenormalizedQuaternionIsRenormalized) {
  std::string text = kTwoFrames;
  text += "ann 0 car vehicle.car 0 0 30 2 4 1.5 1.0004 0 0 0\n";
  std::istringstream in(text);
  const SceneManifest m = ParseNativeManifest(in);
  const auto& q = m.frames[0].annotations.back().box.orientation;
  EXPECT_NEAR(q.norm(), 1.0, 1e-12);
}

TEST(NativeManifest, MissingFileIsIoError) {
  try {
    LoadManifest("/nonexistent/m.txt", ManifestFormat::kNative);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kIoError);
    EXPECT_TRUE(e.is_io());
  }
}

TEST(NuScenesTables, LoadsMiniScene) {
  const SceneManifest m =
      LoadManifest(FixtureDir() / "nuscenes_mini", ManifestFormat::kNuScenesTables);
  EXPECT_EQ(m.scene_id, "scene-0001");
  EXPECT_EQ(m.image_width, 1600);
  EXPECT_EQ(m.image_height, 900);
  ASSERT_EQ(m.frames.size(), 2u);
  // Sorted by timestamp even though the table lists s2 first.
  EXPECT_EQ(m.frames[0].timestamp_us, 1000000);
  EXPECT_EQ(m.frames[0].frame_index, 0);
  EXPECT_EQ(m.frames[0].annotations.size(), 2u);
  EXPECT_EQ(m.frames[1].annotations.size(), 1u);
  EXPECT_DOUBLE_EQ(m.frames[0].camera.fx, 1000.0);
  EXPECT_DOUBLE_EQ(m.frames[0].camera.cy, 450.0);
  EXPECT_DOUBLE_EQ(m.frames[1].ego_pose.translation.x, 105.0);
}

TEST(NuScenesTables, ProjectsPedestrianLeftOfCenter) {
  const SceneManifest m =
      LoadManifest(FixtureDir() / "nuscenes_mini", ManifestFormat::kNuScenesTables);
  const auto boxes = ProjectScene(m);
  // Pedestrian 20 m ahead and 2 m to the left of the camera.
  const auto it = std::find_if(boxes.begin(), boxes.end(),
                               [](const ProjectedAnnotation& a) { return a.category == Category::kHuman; });
  ASSERT_NE(it, boxes.end());
  EXPECT_NEAR(it->box.centroid().x, 700.0, 2.0);
  EXPECT_NEAR(it->box.centroid().y, 450.0, 1e-9);
}

void CopyTables(const std::filesystem::path& to) {
  for (const auto& e : std::filesystem::directory_iterator(FixtureDir() / "nuscenes_mini")) {
    std::filesystem::copy_file(e.path(), to / e.path().filename());
  }
}

TEST(NuScenesTables, MissingTable) {
  TempDir dir;
  CopyTables(dir.path());
  std::filesystem::remove(dir / "ego_pose.json");
  try {
    LoadManifest(dir.path(), ManifestFormat::kNuScenesTables);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kMissingTable);
  }
}

TEST(NuScenesTables, DanglingReference) {
  TempDir dir;
  CopyTables(dir.path());
  std::string text = testing::ReadFile(dir / "instance.json");
  text.replace(text.find("cat_car"), 7, "cat_xxx");
  testing::WriteFile(dir / "instance.json", text);
  try {
    LoadManifest(dir.path(), ManifestFormat::kNuScenesTables);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kDanglingReference);
  }
}

TEST(NuScenesTables, MalformedJson) {
  TempDir dir;
  CopyTables(dir.path());
  testing::WriteFile(dir / "sample.json", "[{\"token\": ");
  try {
    LoadManifest(dir.path(), ManifestFormat::kNuScenesTables);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kMalformedRecord);
  }
}

TEST(NuScenesTables, UnknownSceneSelection) {
  ManifestLoadOptions opts;
  opts.scene = "scene-9999";
  try {
    LoadManifest(FixtureDir() / "nuscenes_mini", ManifestFormat::kNuScenesTables, opts);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kDanglingReference);
  }
  opts.scene = "scene-0001";
  EXPECT_EQ(LoadManifest(FixtureDir() / "nuscenes_mini", ManifestFormat::kNuScenesTables, opts)
                .frames.size(),
            2u);
}

}  // namespace
}  // namespace scaeval
