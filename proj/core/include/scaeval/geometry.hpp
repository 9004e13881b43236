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

#ifndef SCAEVAL_GEOMETRY_HPP_
#define SCAEVAL_GEOMETRY_HPP_

#include <array>
#include <cmath>
#include <optional>

namespace scaeval {

struct Vec3 {
  double x = 0.0;
  double y = 0.0;
  double z = 0.0;

  friend Vec3 operator+(const Vec3& a, const Vec3& b) {
    return {a.x + b.x, a.y + b.y, a.z + b.z};
  }
  friend Vec3 operator-(const Vec3& a, const Vec3& b) {
    return {a.x - b.x, a.y - b.y, a.z - b.z};
  }
  friend Vec3 operator*(double s, const Vec3& v) {
    return {s * v.x, s * v.y, s * v.z};
  }
  friend bool operator==(const Vec3&, const Vec3&) = default;

  double norm() const { return std::sqrt(x * x + y * y + z * z); }
};

struct Vec2 {
  double x = 0.0;
  double y = 0.0;

  friend bool operator==(const Vec2&, const Vec2&) = default;
};

double Distance(const Vec2& a, const Vec2& b);

// Hamilton quaternion stored as (w, x, y, z). Rotations are active: q
// rotates a vector v to q * v * q^-1.
struct Quaternion {
  double w = 1.0;
  double x = 0.0;
  double y = 0.0;
  double z = 0.0;

  static Quaternion Identity() { return {}; }
  static Quaternion FromAxisAngle(const Vec3& axis, double radians);

  double norm() const { return std::sqrt(w * w + x * x + y * y + z * z); }
  Quaternion normalized() const;
  Quaternion conjugate() const { return {w, -x, -y, -z}; }
  // Assumes unit norm, in which case the inverse is the conjugate.
  Quaternion inverse() const { return conjugate(); }

  friend Quaternion operator*(const Quaternion& a, const Quaternion& b);
  friend bool operator==(const Quaternion&, const Quaternion&) = default;
};

Vec3 Rotate(const Quaternion& q, const Vec3& v);

// Rigid transform. For an ego pose it maps ego-frame points to the global
// frame; for a camera extrinsic it maps sensor-frame points to ego.
struct Pose {
  Vec3 translation;
  Quaternion rotation;

  friend bool operator==(const Pose&, const Pose&) = default;
};

// Maps a point expressed in the parent frame into the pose's own frame:
// rotate(rotation^-1, p - translation).
Vec3 ToLocal(const Pose& pose, const Vec3& p);

// Inverse of ToLocal.
Vec3 ToParent(const Pose& pose, const Vec3& p);

struct CameraCalib {
  Pose extrinsic;  // sensor pose in the ego frame
  double fx = 1.0;
  double fy = 1.0;
  double cx = 0.0;
  double cy = 0.0;

  friend bool operator==(const CameraCalib&, const CameraCalib&) = default;
};

// Oriented box. `size` is (width, length, height) in nuScenes order: length
// runs along the box's local x axis (heading), width along y, height along z.
struct Box3D {
  Vec3 center;
  Vec3 size;
  Quaternion orientation;

  friend bool operator==(const Box3D&, const Box3D&) = default;
};

// Corner order follows the nuScenes devkit: corners 0-3 lie on the +x face,
// 4-7 on the -x face. Within each face the (y, z) signs are
// (+,+), (-,+), (-,-), (+,-).
std::array<Vec3, 8> BoxCorners(const Box3D& box);

struct ProjectedBox2D {
  double x_min = 0.0;
  double y_min = 0.0;
  double x_max = 0.0;
  double y_max = 0.0;
  bool fully_in_front = true;

  Vec2 centroid() const { return {(x_min + x_max) / 2.0, (y_min + y_max) / 2.0}; }
  double width() const { return x_max - x_min; }
  double height() const { return y_max - y_min; }
};

struct ProjectionOptions {
  // Corners with camera-frame depth <= z_eps are treated as behind the
  // camera and skipped.
  double z_eps = 1e-6;
  // When set, the bounding box is clamped to [0, image_width] x
  // [0, image_height].
  bool clamp_to_image = false;
  int image_width = 0;
  int image_height = 0;
};

// Pinhole projection of a camera-frame point. Caller guarantees z > 0.
Vec2 ProjectPoint(const CameraCalib& cam, const Vec3& p_camera);

// Global box -> ego frame -> camera frame -> image plane, then the
// axis-aligned bounding box of the projected corners. Returns nullopt when
// no corner lies in front of the camera.
std::optional<ProjectedBox2D> ProjectBox(const Box3D& box_global,
                                         const Pose& ego,
                                         const CameraCalib& cam,
                                         const ProjectionOptions& options = {});

}  // namespace scaeval

#endif  // SCAEVAL_GEOMETRY_HPP_
