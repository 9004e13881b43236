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

#include "scaeval/rle.hpp"

#include <charconv>
#include <numeric>

#include "scaeval/error.hpp"

namespace scaeval {

namespace {

[[noreturn]] void Malformed(std::string_view text, const std::string& why) {
  throw Error(ErrorCode::kMalformedRle, "'" + std::string(text) + "': " + why);
}

}  // namespace

std::uint64_t RleMask::total_length() const {
  return std::accumulate(runs.begin(), runs.end(), std::uint64_t{0},
                         [](std::uint64_t acc, const Run& r) { return acc + r.length; });
}

RleMask ParseRle(std::string_view text) {
  RleMask mask;
  if (text.empty()) Malformed(text, "empty");
  std::size_t pos = 0;
  while (pos <= text.size()) {
    const std::size_t end = std::min(text.find(',', pos), text.size());
    const std::string_view item = text.substr(pos, end - pos);
    const std::size_t colon = item.find(':');
    if (colon == std::string_view::npos) Malformed(text, "run without ':'");
    const std::string_view v = item.substr(0, colon);
    const std::string_view n = item.substr(colon + 1);
    if (v != "0" && v != "1") Malformed(text, "run value must be 0 or 1");
    std::uint64_t length = 0;
    const auto [ptr, ec] = std::from_chars(n.data(), n.data() + n.size(), length);
    if (ec != std::errc() || ptr != n.data() + n.size() || n.empty()) {
      Malformed(text, "bad run length");
    }
    if (length == 0) Malformed(text, "zero-length run");
    mask.runs.push_back({static_cast<std::uint8_t>(v[0] - '0'), length});
    pos = end + 1;
  }
  return mask;
}

std::string FormatRle(const RleMask& mask) {
  std::string out;
  for (std::size_t i = 0; i < mask.runs.size(); ++i) {
    if (i) out += ',';
    out += std::to_string(mask.runs[i].value);
    out += ':';
    out += std::to_string(mask.runs[i].length);
  }
  return out;
}

std::uint64_t MaskArea(const RleMask& mask, std::optional<GridSize> grid) {
  if (grid) {
    const auto expected = static_cast<std::uint64_t>(grid->width) *
                          static_cast<std::uint64_t>(grid->height);
    if (mask.total_length() != expected) {
      throw Error(ErrorCode::kMalformedRle,
                  "run lengths sum to " + std::to_string(mask.total_length()) +
                      ", grid has " + std::to_string(expected) + " pixels");
    }
  }
  std::uint64_t area = 0;
  for (const Run& r : mask.runs) {
    if (r.value) area += r.length;
  }
  return area;
}

std::vector<std::uint8_t> DecodeRle(const RleMask& mask, GridSize grid) {
  MaskArea(mask, grid);  // validates the total
  std::vector<std::uint8_t> dense;
  dense.reserve(mask.total_length());
  for (const Run& r : mask.runs) dense.insert(dense.end(), r.length, r.value);
  return dense;
}

RleMask EncodeRle(std::span<const std::uint8_t> dense) {
  RleMask mask;
  for (const std::uint8_t px : dense) {
    const std::uint8_t v = px ? 1 : 0;
    if (!mask.runs.empty() && mask.runs.back().value == v) {
      ++mask.runs.back().length;
    } else {
      mask.runs.push_back({v, 1});
    }
  }
  return mask;
}

}  // namespace scaeval
