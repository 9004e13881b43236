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

#include "scaeval/image.hpp"

#include <cmath>
#include <fstream>
#include <istream>
#include <ostream>
#include <string>

#include "scaeval/error.hpp"

namespace scaeval {

Image::Image(int width, int height, int channels, double fill)
    : width_(width), height_(height), channels_(channels) {
  if (width < 0 || height < 0 || channels < 1) {
    throw Error(ErrorCode::kInvalidArgument, "bad image dimensions");
  }
  data_.assign(static_cast<std::size_t>(width) * height * channels, fill);
}

namespace {

// Next header token, skipping whitespace and '#' comments.
std::string HeaderToken(std::istream& in) {
  std::string tok;
  int ch;
  while ((ch = in.get()) != EOF) {
    if (ch == '#') {
      while ((ch = in.get()) != EOF && ch != '\n') {
      }
      continue;
    }
    if (std::isspace(ch)) {
      if (!tok.empty()) break;
      continue;
    }
    tok.push_back(static_cast<char>(ch));
  }
  return tok;
}

int HeaderInt(std::istream& in) {
  const std::string tok = HeaderToken(in);
  try {
    std::size_t used = 0;
    const int v = std::stoi(tok, &used);
    if (used != tok.size()) throw std::invalid_argument(tok);
    return v;
  } catch (const std::exception&) {
    throw Error(ErrorCode::kMalformedRecord, "bad PNM header field '" + tok + "'");
  }
}

}  // namespace

Image ReadPnm(std::istream& in) {
  const std::string magic = HeaderToken(in);
  int channels = 0;
  if (magic == "P6") {
    channels = 3;
  } else if (magic == "P5") {
    channels = 1;
  } else {
    throw Error(ErrorCode::kMalformedRecord, "not a binary PNM (magic '" + magic + "')");
  }
  const int w = HeaderInt(in);
  const int h = HeaderInt(in);
  const int maxval = HeaderInt(in);
  if (w <= 0 || h <= 0) throw Error(ErrorCode::kMalformedRecord, "PNM dimensions must be positive");
  if (maxval <= 0 || maxval > 255) {
    throw Error(ErrorCode::kMalformedRecord, "only 8-bit PNM is supported");
  }
  // HeaderToken consumed the single whitespace byte after maxval.
  std::string raw(static_cast<std::size_t>(w) * h * channels, '\0');
  in.read(raw.data(), static_cast<std::streamsize>(raw.size()));
  if (in.gcount() != static_cast<std::streamsize>(raw.size())) {
    throw Error(ErrorCode::kMalformedRecord, "truncated PNM pixel data");
  }
  Image img(w, h, channels);
  const double scale = 255.0 / maxval;
  for (std::size_t i = 0; i < raw.size(); ++i) {
    img.data()[i] = static_cast<unsigned char>(raw[i]) * scale;
  }
  return img;
}

Image ReadPnm(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::kIoError, "cannot read " + path.string());
  return ReadPnm(in);
}

void WritePnm(const Image& image, std::ostream& out) {
  if (image.channels() != 1 && image.channels() != 3) {
    throw Error(ErrorCode::kInvalidArgument, "PNM output needs 1 or 3 channels");
  }
  out << (image.channels() == 3 ? "P6" : "P5") << '\n'
      << image.width() << ' ' << image.height() << "\n255\n";
  std::string raw(image.data().size(), '\0');
  for (std::size_t i = 0; i < raw.size(); ++i) {
    const double v = std::clamp(std::round(image.data()[i]), 0.0, 255.0);
    raw[i] = static_cast<char>(static_cast<unsigned char>(v));
  }
  out.write(raw.data(), static_cast<std::streamsize>(raw.size()));
}

void WritePnm(const Image& image, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorCode::kIoError, "cannot write " + path.string());
  WritePnm(image, out);
  if (!out) throw Error(ErrorCode::kIoError, "write failed for " + path.string());
}

}  // namespace scaeval
