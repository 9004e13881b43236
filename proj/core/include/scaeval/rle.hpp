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

#ifndef SCAEVAL_RLE_HPP_
#define SCAEVAL_RLE_HPP_

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace scaeval {

struct Run {
  std::uint8_t value = 0;  // 0 or 1
  std::uint64_t length = 0;

  friend bool operator==(const Run&, const Run&) = default;
};

struct GridSize {
  int width = 0;
  int height = 0;
};

// Row-major run-length encoded binary mask. Text form is
// "v0:n0,v1:n1,..." with every v in {0,1}.
struct RleMask {
  std::vector<Run> runs;

  std::uint64_t total_length() const;

  friend bool operator==(const RleMask&, const RleMask&) = default;
};

// Throws Error(kMalformedRle).
RleMask ParseRle(std::string_view text);
std::string FormatRle(const RleMask& mask);

// Population count of 1-runs. With `grid`, the run lengths must sum to
// width * height or kMalformedRle is thrown.
std::uint64_t MaskArea(const RleMask& mask,
                       std::optional<GridSize> grid = std::nullopt);

std::vector<std::uint8_t> DecodeRle(const RleMask& mask, GridSize grid);
RleMask EncodeRle(std::span<const std::uint8_t> dense);

}  // namespace scaeval

#endif  // SCAEVAL_RLE_HPP_
