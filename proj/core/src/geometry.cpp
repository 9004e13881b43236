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

#include "scaeval/geometry.hpp"

#include <algorithm>
#include <limits>

namespace scaeval {

double Distance(const Vec2& a, const Vec2& b) {
  return std::hypot(a.x - b.x, a.y - b.y);
}

Quaternion Quaternion::FromAxisAngle(const Vec3& axis, double radians) {
  const double n = axis.norm();
  const double s = std::sin(radians / 2.0) / n;
  return {std::cos(radians / 2.0), axis.x * s, axis.y * s, axis.z * s};
}

Quaternion Quaternion::normalized() const {
  const double n = norm();
  return {w / n, x / n, y / n, z / n};
}

Quaternion operator*(const Quaternion& a, const Quaternion& b) {
  return {
      a.w * b.w - a.x * b.x - a.y * b.y - a.z * b.z,
      a.w * b.x + a.x * b.w + a.y * b.z - a.z * b.y,
      a.w * b.y - a.x * b.z + a.y * b.w + a.z * b.x,
      a.w * b.z + a.x * b.y - a.y * b.x + a.z * b.w,
  };
}

Vec3 Rotate(const Quaternion& q, const Vec3& v) {
  // v' = v + 2w (u x v) + 2 u x (u x v), u = (x, y, z)
  const Vec3 u{q.x, q.y, q.z};
  const Vec3 t{2.0 * (u.y * v.z - u.z * v.y),
               2.0 * (u.z * v.x - u.x * v.z),
               2.0 * (u.x * v.y - u.y * v.x)};
  return {v.x + q.w * t.x + (u.y * t.z - u.z * t.y),
          v.y + q.w * t.y + (u.z * t.x - u.x * t.z),
          v.z + q.w * t.z + (u.x * t.y - u.y * t.x)};
}

Vec3 ToLocal(const Pose& pose, const Vec3& p) {
  return Rotate(pose.rotation.inverse(), p - pose.translation);
}

Vec3 ToParent(const Pose& pose, const Vec3& p) {
  return Rotate(pose.rotation, p) + pose.translation;
}

std::array<Vec3, 8> BoxCorners(const Box3D& box) {
  const double hl = box.size.y / 2.0;  // length along x
  const double hw = box.size.x / 2.0;  // width along y
  const double hh = box.size.z / 2.0;
  static constexpr double kX[8] = {1, 1, 1, 1, -1, -1, -1, -1};
  static constexpr double kY[8] = {1, -1, -1, 1, 1, -1, -1, 1};
  static constexpr double kZ[8] = {1, 1, -1, -1, 1, 1, -1, -1};
  std::array<Vec3, 8> corners;
  for (int i = 0; i < 8; ++i) {
    const Vec3 local{kX[i] * hl, kY[i] * hw, kZ[i] * hh};
    corners[i] = box.center + Rotate(box.orientation, local);
  }
  return corners;
}

Vec2 ProjectPoint(const CameraCalib& cam, const Vec3& p) {
  return {cam.fx * p.x / p.z + cam.cx, cam.fy * p.y / p.z + cam.cy};
}

std::optional<ProjectedBox2D> ProjectBox(const Box3D& box_global, const Pose& ego,
                                         const CameraCalib& cam,
                                         const ProjectionOptions& options) {
  // Move the box, not its corners: global -> ego, then ego -> camera.
  Box3D box = box_global;
  box.center = ToLocal(ego, box.center);
  box.orientation = ego.rotation.inverse() * box.orientation;
  box.center = ToLocal(cam.extrinsic, box.center);
  box.orientation = cam.extrinsic.rotation.inverse() * box.orientation;

  ProjectedBox2D out;
  out.x_min = out.y_min = std::numeric_limits<double>::infinity();
  out.x_max = out.y_max = -std::numeric_limits<double>::infinity();
  int in_front = 0;
  for (const Vec3& corner : BoxCorners(box)) {
    if (corner.z <= options.z_eps) continue;
    ++in_front;
    const Vec2 uv = ProjectPoint(cam, corner);
    out.x_min = std::min(out.x_min, uv.x);
    out.x_max = std::max(out.x_max, uv.x);
    out.y_min = std::min(out.y_min, uv.y);
    out.y_max = std::max(out.y_max, uv.y);
  }
  if (in_front == 0) return std::nullopt;
  out.fully_in_front = in_front == 8;

  if (options.clamp_to_image) {
    const double w = options.image_width;
    const double h = options.image_height;
    out.x_min = std::clamp(out.x_min, 0.0, w);
    out.x_max = std::clamp(out.x_max, 0.0, w);
    out.y_min = std::clamp(out.y_min, 0.0, h);
    out.y_max = std::clamp(out.y_max, 0.0, h);
  }
  return out;
}

}  // namespace scaeval
