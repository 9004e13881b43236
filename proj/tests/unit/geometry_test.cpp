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

#include <cmath>
#include <random>

#include <gtest/gtest.h>

#include "oracles.hpp"
#include "scaeval/geometry.hpp"
#include "test_util.hpp"

namespace scaeval {
namespace {

using testing::RandomRotation;
using testing::Uniform;

// nuScenes-style front camera: optical axis along ego +x, image y down.
const Quaternion kCamToEgo{0.5, -0.5, 0.5, -0.5};

void ExpectVecNear(const Vec3& a, const Vec3& b, double tol) {
  EXPECT_NEAR(a.x, b.x, tol);
  EXPECT_NEAR(a.y, b.y, tol);
  EXPECT_NEAR(a.z, b.z, tol);
}

TEST(Quaternion, RotateMatchesRotationMatrix) {
  std::mt19937_64 rng(7);
  for (int i = 0; i < 200; ++i) {
    const Quaternion q = RandomRotation(rng);
    const Vec3 v{Uniform(rng, -5, 5), Uniform(rng, -5, 5), Uniform(rng, -5, 5)};
    const Eigen::Vector3d r = oracle::RotationMatrix(q) * Eigen::Vector3d(v.x, v.y, v.z);
    ExpectVecNear(Rotate(q, v), {r.x(), r.y(), r.z()}, 1e-12);
  }
}

TEST(Quaternion, AxisAngleQuarterTurn) {
  const Quaternion q = Quaternion::FromAxisAngle({0, 0, 1}, M_PI / 2);
  ExpectVecNear(Rotate(q, {1, 0, 0}), {0, 1, 0}, 1e-15);
  ExpectVecNear(Rotate(q, {0, 1, 0}), {-1, 0, 0}, 1e-15);
}

TEST(Quaternion, ProductComposesRotations) {
  std::mt19937_64 rng(11);
  for (int i = 0; i < 100; ++i) {
    const Quaternion a = RandomRotation(rng);
    const Quaternion b = RandomRotation(rng);
    const Vec3 v{1.5, -2.0, 0.25};
    ExpectVecNear(Rotate(a * b, v), Rotate(a, Rotate(b, v)), 1e-12);
  }
}

TEST(Quaternion, FrontCameraAxes) {
  // Camera z (optical axis) is ego x, camera x is ego -y, camera y is ego -z.
  ExpectVecNear(Rotate(kCamToEgo, {0, 0, 1}), {1, 0, 0}, 1e-15);
  ExpectVecNear(Rotate(kCamToEgo, {1, 0, 0}), {0, -1, 0}, 1e-15);
  ExpectVecNear(Rotate(kCamToEgo, {0, 1, 0}), {0, 0, -1}, 1e-15);
}

TEST(Pose, ToLocalInvertsToParent) {
  std::mt19937_64 rng(3);
  for (int i = 0; i < 100; ++i) {
    const Pose p{{Uniform(rng, -100, 100), Uniform(rng, -100, 100), Uniform(rng, -2, 2)},
                 RandomRotation(rng)};
    const Vec3 v{Uniform(rng, -50, 50), Uniform(rng, -50, 50), Uniform(rng, -50, 50)};
    ExpectVecNear(ToLocal(p, ToParent(p, v)), v, 1e-10);
    ExpectVecNear(ToParent(p, ToLocal(p, v)), v, 1e-10);
  }
}

TEST(BoxCorners, LengthRunsAlongHeading) {
  Box3D box;
  box.size = {2.0, 4.0, 1.5};  // w, l, h
  const auto c = BoxCorners(box);
  // nuScenes order: first four corners on the front (+x) face.
  for (int i = 0; i < 4; ++i) EXPECT_DOUBLE_EQ(c[i].x, 2.0);
  for (int i = 4; i < 8; ++i) EXPECT_DOUBLE_EQ(c[i].x, -2.0);
  EXPECT_DOUBLE_EQ(c[0].y, 1.0);
  EXPECT_DOUBLE_EQ(c[1].y, -1.0);
  EXPECT_DOUBLE_EQ(c[0].z, 0.75);
  EXPECT_DOUBLE_EQ(c[2].z, -0.75);
}

TEST(BoxCorners, RotatedAndTranslated) {
  Box3D box;
  box.center = {10, 5, 1};
  box.size = {2.0, 4.0, 2.0};
  box.orientation = Quaternion::FromAxisAngle({0, 0, 1}, M_PI / 2);
  const auto c = BoxCorners(box);
  // Heading now points along +y.
  ExpectVecNear(c[0], {9.0, 7.0, 2.0}, 1e-12);
  ExpectVecNear(c[6], {11.0, 3.0, 0.0}, 1e-12);
}

TEST(ProjectBox, IdentityCameraCentroid) {
  CameraCalib cam;
  cam.fx = cam.fy = 100;
  cam.cx = cam.cy = 50;
  Box3D box;
  box.center = {0, 0, 10};
  box.size = {1, 1, 1};
  const auto b = ProjectBox(box, Pose{}, cam);
  ASSERT_TRUE(b.has_value());
  EXPECT_DOUBLE_EQ(b->centroid().x, 50.0);
  EXPECT_DOUBLE_EQ(b->centroid().y, 50.0);
  EXPECT_NEAR(b->x_min, 50 - 50 / 9.5, 1e-12);
  EXPECT_NEAR(b->x_max, 50 + 50 / 9.5, 1e-12);
  EXPECT_TRUE(b->fully_in_front);
}

TEST(ProjectBox, BehindCameraIsRejected) {
  CameraCalib cam;
  Box3D box;
  box.center = {0, 0, -10};
  box.size = {1, 1, 1};
  EXPECT_FALSE(ProjectBox(box, Pose{}, cam).has_value());
}

TEST(ProjectBox, StraddlingBoxUsesFrontCornersOnly) {
  CameraCalib cam;
  cam.fx = cam.fy = 100;
  Box3D box;
  box.center = {0, 0, 0.5};
  box.size = {2, 2, 2};  // corners at z = -0.5 and 1.5
  const auto b = ProjectBox(box, Pose{}, cam);
  ASSERT_TRUE(b.has_value());
  EXPECT_FALSE(b->fully_in_front);
  EXPECT_NEAR(b->x_min, -100 / 1.5, 1e-12);
  EXPECT_NEAR(b->x_max, 100 / 1.5, 1e-12);
}

TEST(ProjectBox, ClampToImage) {
  CameraCalib cam;
  cam.fx = cam.fy = 100;
  cam.cx = cam.cy = 50;
  Box3D box;
  box.center = {0.4, 0, 2};
  box.size = {1, 1, 1};
  ProjectionOptions opt;
  opt.clamp_to_image = true;
  opt.image_width = 100;
  opt.image_height = 100;
  const auto b = ProjectBox(box, Pose{}, cam, opt);
  ASSERT_TRUE(b.has_value());
  EXPECT_DOUBLE_EQ(b->x_max, 100.0);
  EXPECT_GE(b->x_min, 0.0);
  EXPECT_GE(b->y_min, 0.0);
  EXPECT_LE(b->y_max, 100.0);
}

TEST(ProjectBox, MatchesHomogeneousOracle) {
  std::mt19937_64 rng(2024);
  for (int i = 0; i < 500; ++i) {
    Pose ego{{Uniform(rng, -500, 500), Uniform(rng, -500, 500), Uniform(rng, -1, 1)},
             testing::RandomYaw(rng)};
    CameraCalib cam;
    cam.extrinsic = {{Uniform(rng, 0, 2), Uniform(rng, -0.5, 0.5), Uniform(rng, 1, 2)},
                     (Quaternion::FromAxisAngle({0, 0, 1}, Uniform(rng, -0.3, 0.3)) * kCamToEgo)};
    cam.fx = Uniform(rng, 500, 1500);
    cam.fy = cam.fx * Uniform(rng, 0.95, 1.05);
    cam.cx = Uniform(rng, 600, 1000);
    cam.cy = Uniform(rng, 400, 500);
    // Box in camera coordinates, then carried to the world frame.
    const Vec3 in_cam{Uniform(rng, -20, 20), Uniform(rng, -4, 4), Uniform(rng, 8, 80)};
    const Eigen::Vector4d w =
        oracle::WorldFromCamera(ego, cam) * Eigen::Vector4d(in_cam.x, in_cam.y, in_cam.z, 1);
    Box3D box{{w.x(), w.y(), w.z()},
              {Uniform(rng, 0.5, 3), Uniform(rng, 0.5, 6), Uniform(rng, 0.5, 3)},
              testing::RandomYaw(rng)};
    const auto got = ProjectBox(box, ego, cam);
    const auto want = oracle::ProjectBox(box, ego, cam);
    ASSERT_TRUE(got.has_value());
    ASSERT_TRUE(want.has_value());
    EXPECT_NEAR(got->x_min, want->x_min, 1e-6);
    EXPECT_NEAR(got->y_min, want->y_min, 1e-6);
    EXPECT_NEAR(got->x_max, want->x_max, 1e-6);
    EXPECT_NEAR(got->y_max, want->y_max, 1e-6);
    EXPECT_EQ(got->fully_in_front, want->fully_in_front);
  }
}

}  // namespace
}  // namespace scaeval
