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

#include "scaeval/mask_metrics.hpp"

#include <algorithm>

#include "scaeval/parallel.hpp"
#include "scaeval/track_metrics.hpp"

namespace scaeval {

std::vector<MaskDiffRow> MaskDiffTable(std::span<const TrackPair> pairs, Category per, int jobs) {
  int clip_len = 0;
  for (const TrackPair& p : pairs) {
    if (p.gt.category == per) clip_len = std::max(clip_len, p.gt.clip_length);
  }
  const std::size_t frames = clip_len > 1 ? static_cast<std::size_t>(clip_len - 1) : 0;
  return ParallelMap(frames, jobs, [&](std::size_t i) {
    const int k = static_cast<int>(i) + 1;
    std::vector<double> diffs;
    for (const TrackPair& p : pairs) {
      if (p.gt.category != per) continue;
      const TrackObservation* g = p.gt.at(k);
      const TrackObservation* q = p.pred.at(k);
      if (!g || !q || !g->present || !q->present) continue;
      const auto ga = g->area();
      const auto qa = q->area();
      if (!ga || !qa) continue;
      diffs.push_back(static_cast<double>(*qa - *ga));
    }
    MaskDiffRow row;
    row.frame_index = k;
    row.category = per;
    row.count = static_cast<std::int64_t>(diffs.size());
    if (auto ms = PopulationMeanStd(diffs)) {
      row.avg_diff_px = ms->mean;
      row.std_px = ms->std;
    }
    return row;
  });
}

}  // namespace scaeval
