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

#ifndef SCAEVAL_IMAGE_HPP_
#define SCAEVAL_IMAGE_HPP_

#include <cstddef>
#include <filesystem>
#include <iosfwd>
#include <vector>

namespace scaeval {

// Interleaved row-major pixel grid with floating-point samples on the
// 0..255 scale. Resampling works on doubles; quantization to 8 bits only
// happens when writing a file.
class Image {
 public:
  Image() = default;
  Image(int width, int height, int channels, double fill = 0.0);

  int width() const { return width_; }
  int height() const { return height_; }
  int channels() const { return channels_; }
  bool empty() const { return data_.empty(); }

  double& at(int x, int y, int c) {
    return data_[(static_cast<std::size_t>(y) * width_ + x) * channels_ + c];
  }
  double at(int x, int y, int c) const {
    return data_[(static_cast<std::size_t>(y) * width_ + x) * channels_ + c];
  }

  std::vector<double>& data() { return data_; }
  const std::vector<double>& data() const { return data_; }

  friend bool operator==(const Image&, const Image&) = default;

 private:
  int width_ = 0;
  int height_ = 0;
  int channels_ = 0;
  std::vector<double> data_;
};

// Binary portable pixmap (P6, 3 channels) and graymap (P5, 1 channel), 8-bit.
Image ReadPnm(std::istream& in);
Image ReadPnm(const std::filesystem::path& path);
// Samples are rounded half away from zero and clamped to [0, 255].
void WritePnm(const Image& image, std::ostream& out);
void WritePnm(const Image& image, const std::filesystem::path& path);

}  // namespace scaeval

#endif  // SCAEVAL_IMAGE_HPP_
