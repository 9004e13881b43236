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

#ifndef SCAEVAL_MASK_METRICS_HPP_
#define SCAEVAL_MASK_METRICS_HPP_

#include <cstdint>
#include <span>
#include <vector>

#include "scaeval/category.hpp"
#include "scaeval/tracks.hpp"

namespace scaeval {

struct MaskDiffRow {
  int frame_index = 0;  // 0-based track frame index
  Category category = Category::kOther;
  double avg_diff_px = 0.0;  // mean of (pred area - gt area)
  double std_px = 0.0;       // population standard deviation
  std::int64_t count = 0;

  // 1-based frame number (the conditioning frame is frame 1).
  int frame_number() const { return frame_index + 1; }
};

// One row per frame index 1 .. clip_len - 1 for pairs whose ground-truth
// category is `per`. Frame 0 is the conditioning frame and is skipped. Only
// co-present observations carrying an area on both sides contribute; each
// instance contributes one sample per frame. Empty cells have count 0.
std::vector<MaskDiffRow> MaskDiffTable(std::span<const TrackPair> pairs, Category per,
                                       int jobs = 1);

}  // namespace scaeval

#endif  // SCAEVAL_MASK_METRICS_HPP_
