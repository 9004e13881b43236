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

#include "scaeval/projection.hpp"

#include <map>

#include "scaeval/parallel.hpp"

namespace scaeval {

bool IsVisible(const ProjectedBox2D& box, int image_width, int image_height,
               const VisibilityOptions& options) {
  if (options.require_fully_in_front && !box.fully_in_front) return false;
  if (options.require_in_image) {
    if (box.x_max < 0.0 || box.x_min > image_width) return false;
    if (box.y_max < 0.0 || box.y_min > image_height) return false;
  }
  return true;
}

std::vector<ProjectedAnnotation> ProjectScene(const SceneManifest& manifest,
                                              const VisibilityOptions& options, int jobs) {
  ProjectionOptions popts = options.projection;
  popts.image_width = manifest.image_width;
  popts.image_height = manifest.image_height;

  auto per_frame = ParallelMap(manifest.frames.size(), jobs, [&](std::size_t i) {
    const FrameRecord& f = manifest.frames[i];
    std::map<std::string, ProjectedAnnotation> visible;
    for (const Annotation3D& a : f.annotations) {
      const auto box = ProjectBox(a.box, f.ego_pose, f.camera, popts);
      if (!box || !IsVisible(*box, manifest.image_width, manifest.image_height, options)) continue;
      visible[a.instance_id] = {f.frame_index, a.instance_id, a.category, *box};
    }
    std::vector<ProjectedAnnotation> rows;
    rows.reserve(visible.size());
    for (auto& [id, row] : visible) rows.push_back(std::move(row));
    return rows;
  });

  std::vector<ProjectedAnnotation> out;
  for (auto& rows : per_frame) {
    for (auto& r : rows) out.push_back(std::move(r));
  }
  return out;
}

std::vector<ActorCentroids> CentroidSeries(const SceneManifest& manifest,
                                           const VisibilityOptions& options, int jobs) {
  std::map<int, std::size_t> position;  // frame_index -> position
  for (std::size_t i = 0; i < manifest.frames.size(); ++i) {
    position[manifest.frames[i].frame_index] = i;
  }
  std::map<std::string, ActorCentroids> actors;
  for (const auto& [id, category] : manifest.instances()) {
    ActorCentroids& a = actors[id];
    a.instance_id = id;
    a.category = category;
    a.by_frame.assign(manifest.frames.size(), std::nullopt);
  }
  for (const ProjectedAnnotation& p : ProjectScene(manifest, options, jobs)) {
    actors[p.instance_id].by_frame[position[p.frame_index]] = p.box.centroid();
  }
  std::vector<ActorCentroids> out;
  out.reserve(actors.size());
  for (auto& [id, a] : actors) out.push_back(std::move(a));
  return out;
}

std::vector<Track> GroundTruthTracks(const SceneManifest& manifest, const std::string& clip_id,
                                     const VisibilityOptions& options, int jobs) {
  std::vector<Track> out;
  const int n = static_cast<int>(manifest.frames.size());
  for (const ActorCentroids& a : CentroidSeries(manifest, options, jobs)) {
    Track t;
    t.clip_id = clip_id;
    t.source = TrackSource::GroundTruth();
    t.instance_id = a.instance_id;
    t.category = a.category;
    t.clip_length = n;
    for (int f = 0; f < n; ++f) {
      TrackObservation o;
      o.frame_index = f;
      o.present = a.by_frame[f].has_value();
      o.centroid = a.by_frame[f];
      t.observations.push_back(std::move(o));
    }
    out.push_back(std::move(t));
  }
  return out;
}

}  // namespace scaeval
