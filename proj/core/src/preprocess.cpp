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

#include "scaeval/preprocess.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "scaeval/error.hpp"
#include "scaeval/parallel.hpp"

namespace scaeval {

CropPlan PlanCrop(int src_w, int src_h, int out_w, int out_h) {
  if (src_w < 1 || src_h < 1 || out_w < 1 || out_h < 1) {
    throw Error(ErrorCode::kInvalidArgument, "crop dimensions must be at least 1");
  }
  CropPlan plan;
  plan.src_w = src_w;
  plan.src_h = src_h;
  plan.out_w = out_w;
  plan.out_h = out_h;
  plan.crop_w = src_w;
  plan.crop_h = src_h;
  const auto lhs = static_cast<long long>(src_w) * out_h;
  const auto rhs = static_cast<long long>(out_w) * src_h;
  if (lhs > rhs) {
    // Too wide: round(src_h * out_w / out_h), half up, in integers.
    plan.crop_w = static_cast<int>((2LL * src_h * out_w + out_h) / (2LL * out_h));
  } else if (lhs < rhs) {
    plan.crop_h = static_cast<int>((2LL * src_w * out_h + out_w) / (2LL * out_w));
  }
  plan.crop_w = std::clamp(plan.crop_w, 1, src_w);
  plan.crop_h = std::clamp(plan.crop_h, 1, src_h);
  plan.crop_x = (src_w - plan.crop_w) / 2;
  plan.crop_y = (src_h - plan.crop_h) / 2;
  return plan;
}

Image Crop(const Image& image, int x, int y, int w, int h) {
  if (x < 0 || y < 0 || w < 1 || h < 1 || x + w > image.width() || y + h > image.height()) {
    throw Error(ErrorCode::kInvalidArgument, "crop window outside the image");
  }
  Image out(w, h, image.channels());
  for (int r = 0; r < h; ++r) {
    for (int c = 0; c < w; ++c) {
      for (int k = 0; k < image.channels(); ++k) out.at(c, r, k) = image.at(x + c, y + r, k);
    }
  }
  return out;
}

double LanczosKernel(double x) {
  if (x == 0.0) return 1.0;
  if (std::abs(x) >= kLanczosLobes) return 0.0;
  // Exact zeros at the integers keep scale-1 resampling an identity.
  if (x == std::round(x)) return 0.0;
  const double px = std::numbers::pi * x;
  return kLanczosLobes * std::sin(px) * std::sin(px / kLanczosLobes) / (px * px);
}

namespace {

struct Tap {
  int index;
  double weight;
};

// Per output sample: clamped source indices and normalized weights.
std::vector<std::vector<Tap>> LanczosTaps(int in_size, int out_size) {
  const double scale = static_cast<double>(in_size) / out_size;
  const double filter_scale = std::max(scale, 1.0);
  const double support = kLanczosLobes * filter_scale;
  std::vector<std::vector<Tap>> taps(out_size);
  for (int i = 0; i < out_size; ++i) {
    const double center = (i + 0.5) * scale;
    const int lo = static_cast<int>(std::floor(center - support));
    const int hi = static_cast<int>(std::ceil(center + support));
    double total = 0.0;
    for (int j = lo; j <= hi; ++j) {
      const double w = LanczosKernel((j + 0.5 - center) / filter_scale);
      if (w == 0.0) continue;
      taps[i].push_back({std::clamp(j, 0, in_size - 1), w});
      total += w;
    }
    for (Tap& t : taps[i]) t.weight /= total;
  }
  return taps;
}

std::vector<std::vector<Tap>> BilinearTaps(int in_size, int out_size) {
  const double scale = static_cast<double>(in_size) / out_size;
  std::vector<std::vector<Tap>> taps(out_size);
  for (int i = 0; i < out_size; ++i) {
    const double src = std::max((i + 0.5) * scale - 0.5, 0.0);
    const int i0 = std::min(static_cast<int>(std::floor(src)), in_size - 1);
    const int i1 = std::min(i0 + 1, in_size - 1);
    const double frac = src - i0;
    taps[i] = {{i0, 1.0 - frac}, {i1, frac}};
  }
  return taps;
}

Image Separable(const Image& in, int out_w, int out_h,
                const std::vector<std::vector<Tap>>& xtaps,
                const std::vector<std::vector<Tap>>& ytaps) {
  const int ch = in.channels();
  Image tmp(out_w, in.height(), ch);
  for (int y = 0; y < in.height(); ++y) {
    for (int x = 0; x < out_w; ++x) {
      for (int k = 0; k < ch; ++k) {
        double acc = 0.0;
        for (const Tap& t : xtaps[x]) acc += t.weight * in.at(t.index, y, k);
        tmp.at(x, y, k) = acc;
      }
    }
  }
  Image out(out_w, out_h, ch);
  for (int y = 0; y < out_h; ++y) {
    for (int x = 0; x < out_w; ++x) {
      for (int k = 0; k < ch; ++k) {
        double acc = 0.0;
        for (const Tap& t : ytaps[y]) acc += t.weight * tmp.at(x, t.index, k);
        out.at(x, y, k) = acc;
      }
    }
  }
  return out;
}

void CheckResize(const Image& image, int out_w, int out_h) {
  if (image.empty() || out_w < 1 || out_h < 1) {
    throw Error(ErrorCode::kInvalidArgument, "resize needs a non-empty image and positive size");
  }
}

}  // namespace

Image ResizeLanczos(const Image& image, int out_w, int out_h) {
  CheckResize(image, out_w, out_h);
  return Separable(image, out_w, out_h, LanczosTaps(image.width(), out_w),
                   LanczosTaps(image.height(), out_h));
}

Image ResizeBilinear(const Image& image, int out_w, int out_h) {
  CheckResize(image, out_w, out_h);
  return Separable(image, out_w, out_h, BilinearTaps(image.width(), out_w),
                   BilinearTaps(image.height(), out_h));
}

Image ApplyCropPlan(const Image& image, const CropPlan& plan) {
  if (image.width() != plan.src_w || image.height() != plan.src_h) {
    throw Error(ErrorCode::kInvalidArgument, "crop plan was made for a different image size");
  }
  const Image cropped = Crop(image, plan.crop_x, plan.crop_y, plan.crop_w, plan.crop_h);
  return plan.resample == Resample::kLanczos ? ResizeLanczos(cropped, plan.out_w, plan.out_h)
                                             : ResizeBilinear(cropped, plan.out_w, plan.out_h);
}

Image PreprocessFid(const Image& image) {
  if (image.empty()) throw Error(ErrorCode::kInvalidArgument, "empty image");
  return ApplyCropPlan(image, PlanCrop(image.width(), image.height()));
}

std::vector<Image> PreprocessFvd(std::span<const Image> frames, int jobs) {
  for (const Image& f : frames) {
    if (f.width() != frames.front().width() || f.height() != frames.front().height() ||
        f.channels() != frames.front().channels()) {
      throw Error(ErrorCode::kInvalidArgument, "clip frames differ in size");
    }
  }
  return ParallelMap(frames.size(), jobs, [&](std::size_t i) {
    return ResizeBilinear(PreprocessFid(frames[i]), kFvdSize, kFvdSize);
  });
}

}  // namespace scaeval
