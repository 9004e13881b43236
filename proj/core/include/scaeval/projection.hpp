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

#ifndef SCAEVAL_PROJECTION_HPP_
#define SCAEVAL_PROJECTION_HPP_

#include <optional>
#include <string>
#include <vector>

#include "scaeval/geometry.hpp"
#include "scaeval/scene.hpp"
#include "scaeval/tracks.hpp"

namespace scaeval {

struct VisibilityOptions {
  ProjectionOptions projection;
  // Drop boxes that straddle the image plane.
  bool require_fully_in_front = false;
  // Drop boxes whose projected rectangle misses the image entirely.
  bool require_in_image = true;
};

struct ProjectedAnnotation {
  int frame_index = 0;
  std::string instance_id;
  Category category = Category::kOther;
  ProjectedBox2D box;
};

bool IsVisible(const ProjectedBox2D& box, int image_width, int image_height,
               const VisibilityOptions& options);

// Projects every annotation of every frame. Annotations that are not
// visible under `options` are omitted. Output is ordered by frame, then by
// instance id.
std::vector<ProjectedAnnotation> ProjectScene(const SceneManifest& manifest,
                                              const VisibilityOptions& options = {},
                                              int jobs = 1);

// Per-instance centroid series over the manifest's frames (position in the
// frame list, not frame_index). Absent entries are frames where the actor
// is not visible.
struct ActorCentroids {
  std::string instance_id;
  Category category = Category::kOther;
  std::vector<std::optional<Vec2>> by_frame;
};

std::vector<ActorCentroids> CentroidSeries(const SceneManifest& manifest,
                                           const VisibilityOptions& options = {},
                                           int jobs = 1);

// Ground-truth tracks whose presence and centroids come from projected
// annotations; one observation per frame, clip length = frame count.
std::vector<Track> GroundTruthTracks(const SceneManifest& manifest,
                                     const std::string& clip_id,
                                     const VisibilityOptions& options = {},
                                     int jobs = 1);

}  // namespace scaeval

#endif  // SCAEVAL_PROJECTION_HPP_
