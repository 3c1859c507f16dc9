// Copyright 2026 The ambc-mvs Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <cassert>
#include <cmath>
#include <cstdint>
#include <span>
#include <vector>

namespace ambc {

struct Rgb {
  std::uint8_t r = 0;
  std::uint8_t g = 0;
  std::uint8_t b = 0;
  bool operator==(const Rgb&) const = default;
};

// Dense row-major image. Pixel (x, y) is column x, row y; integer
// coordinates address pixel centers.
template <typename T>
class Image {
 public:
  Image() = default;
  Image(int width, int height, const T& fill = T{})
      : width_(width), height_(height),
        pixels_(static_cast<std::size_t>(width) * height, fill) {}

  int width() const { return width_; }
  int height() const { return height_; }
  std::size_t size() const { return pixels_.size(); }
  bool empty() const { return pixels_.empty(); }

  bool Contains(int x, int y) const {
    return x >= 0 && y >= 0 && x < width_ && y < height_;
  }

  T& operator()(int x, int y) {
    assert(Contains(x, y));
    return pixels_[static_cast<std::size_t>(y) * width_ + x];
  }
  const T& operator()(int x, int y) const {
    assert(Contains(x, y));
    return pixels_[static_cast<std::size_t>(y) * width_ + x];
  }

  std::span<T> pixels() { return pixels_; }
  std::span<const T> pixels() const { return pixels_; }

  bool operator==(const Image&) const = default;

 private:
  int width_ = 0;
  int height_ = 0;
  std::vector<T> pixels_;
};

// Bilinear lookup; caller guarantees 0 <= x <= w-1 and 0 <= y <= h-1.
inline double SampleBilinear(const Image<float>& image, double x, double y) {
  const int x0 = static_cast<int>(x);
  const int y0 = static_cast<int>(y);
  const int x1 = x0 + 1 < image.width() ? x0 + 1 : x0;
  const int y1 = y0 + 1 < image.height() ? y0 + 1 : y0;
  const double fx = x - x0;
  const double fy = y - y0;
  const double top = (1.0 - fx) * image(x0, y0) + fx * image(x1, y0);
  const double bottom = (1.0 - fx) * image(x0, y1) + fx * image(x1, y1);
  return (1.0 - fy) * top + fy * bottom;
}

inline bool InBilinearRange(const Image<float>& image, double x, double y) {
  return x >= 0.0 && y >= 0.0 && x <= image.width() - 1 &&
         y <= image.height() - 1;
}

}  // namespace ambc
