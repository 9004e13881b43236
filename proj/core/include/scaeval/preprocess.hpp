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

#ifndef SCAEVAL_PREPROCESS_HPP_
#define SCAEVAL_PREPROCESS_HPP_

#include <span>
#include <vector>

#include "scaeval/image.hpp"

namespace scaeval {

inline constexpr int kFidWidth = 448;
inline constexpr int kFidHeight = 256;
inline constexpr int kFvdSize = 224;
inline constexpr int kLanczosLobes = 3;

enum class Resample { kLanczos, kBilinear };

// Center crop that matches the output aspect ratio, followed by a resample
// to out_w x out_h.
struct CropPlan {
  int src_w = 0;
  int src_h = 0;
  int crop_x = 0;
  int crop_y = 0;
  int crop_w = 0;
  int crop_h = 0;
  int out_w = kFidWidth;
  int out_h = kFidHeight;
  Resample resample = Resample::kLanczos;

  friend bool operator==(const CropPlan&, const CropPlan&) = default;
};

// The ratio comparison is exact (integer cross-multiplication). The cropped
// extent is rounded half up, the offset floored.
CropPlan PlanCrop(int src_w, int src_h, int out_w = kFidWidth, int out_h = kFidHeight);

Image Crop(const Image& image, int x, int y, int w, int h);

// Lanczos window sinc(x) * sinc(x / a), a = 3; zero outside (-3, 3).
double LanczosKernel(double x);

// Separable Lanczos-3. When downscaling the kernel is stretched by the scale
// factor (antialiasing). Out-of-range taps clamp to the nearest edge pixel;
// weights are normalized to sum to one.
Image ResizeLanczos(const Image& image, int out_w, int out_h);

// Bilinear without corner alignment: src = (dst + 0.5) * scale - 0.5,
// clamped to the valid range. No antialiasing.
Image ResizeBilinear(const Image& image, int out_w, int out_h);

Image ApplyCropPlan(const Image& image, const CropPlan& plan);

// Center crop to 448:256 and Lanczos resize to 448x256.
Image PreprocessFid(const Image& image);

// PreprocessFid per frame, then bilinear to 224x224. Frames must share
// dimensions (kInvalidArgument otherwise).
std::vector<Image> PreprocessFvd(std::span<const Image> frames, int jobs = 1);

}  // namespace scaeval

#endif  // SCAEVAL_PREPROCESS_HPP_
