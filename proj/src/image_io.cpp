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

#include <png.h>

#include <cctype>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <iterator>
#include <memory>
#include <vector>

#include "ambc/errors.hpp"
#include "ambc/scene_io.hpp"

namespace ambc {
namespace {

std::vector<std::uint8_t> ReadAll(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DatasetError("cannot open " + path.string());
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

// Netpbm header tokens, skipping '#' comments.
class PnmHeader {
 public:
  PnmHeader(const std::vector<std::uint8_t>& bytes, const std::string& name)
      : bytes_(bytes), name_(name) {}

  std::string Token() {
    SkipSpace();
    std::string token;
    while (pos_ < bytes_.size() && !std::isspace(bytes_[pos_])) {
      token.push_back(static_cast<char>(bytes_[pos_++]));
    }
    if (token.empty()) throw FormatError(name_ + ": truncated header");
    return token;
  }
  int Number() {
    const std::string token = Token();
    try {
      return std::stoi(token);
    } catch (const std::exception&) {
      throw FormatError(name_ + ": bad header value '" + token + "'");
    }
  }
  // Single whitespace byte separates header from raster.
  std::size_t RasterOffset() const { return pos_ + 1; }

 private:
  void SkipSpace() {
    while (pos_ < bytes_.size()) {
      if (bytes_[pos_] == '#') {
        while (pos_ < bytes_.size() && bytes_[pos_] != '\n') ++pos_;
      } else if (std::isspace(bytes_[pos_])) {
        ++pos_;
      } else {
        break;
      }
    }
  }

  const std::vector<std::uint8_t>& bytes_;
  const std::string& name_;
  std::size_t pos_ = 0;
};

LoadedImage LoadPnm(const std::filesystem::path& path) {
  const std::vector<std::uint8_t> bytes = ReadAll(path);
  const std::string name = path.string();
  PnmHeader header(bytes, name);
  const std::string magic = header.Token();
  if (magic != "P5" && magic != "P6") {
    throw FormatError(name + ": unsupported netpbm type " + magic);
  }
  const int channels = magic == "P6" ? 3 : 1;
  const int width = header.Number();
  const int height = header.Number();
  const int maxval = header.Number();
  if (width <= 0 || height <= 0 || maxval <= 0 || maxval > 65535) {
    throw FormatError(name + ": bad dimensions or maxval");
  }
  const int sample_bytes = maxval > 255 ? 2 : 1;
  const std::size_t offset = header.RasterOffset();
  const std::size_t needed =
      static_cast<std::size_t>(width) * height * channels * sample_bytes;
  if (bytes.size() < offset + needed) throw LengthError(name + ": truncated raster");

  auto sample = [&](std::size_t i) -> int {
    const std::size_t at = offset + i * sample_bytes;
    return sample_bytes == 2 ? (bytes[at] << 8) | bytes[at + 1] : bytes[at];
  };

  LoadedImage out;
  out.gray = Image<float>(width, height);
  if (channels == 3) out.color = Image<Rgb>(width, height);
  for (int y = 0; y < height; ++y) {
    for (int x = 0; x < width; ++x) {
      const std::size_t i = static_cast<std::size_t>(y) * width + x;
      if (channels == 1) {
        out.gray(x, y) = static_cast<float>(static_cast<double>(sample(i)) / maxval);
      } else {
        const double r = static_cast<double>(sample(3 * i)) / maxval;
        const double g = static_cast<double>(sample(3 * i + 1)) / maxval;
        const double b = static_cast<double>(sample(3 * i + 2)) / maxval;
        auto to_byte = [](double v) {
          return static_cast<std::uint8_t>(std::lround(v * 255.0));
        };
        out.color(x, y) = {to_byte(r), to_byte(g), to_byte(b)};
        out.gray(x, y) = static_cast<float>(0.299 * r + 0.587 * g + 0.114 * b);
      }
    }
  }
  return out;
}

LoadedImage LoadPng(const std::filesystem::path& path) {
  png_image png{};
  png.version = PNG_IMAGE_VERSION;
  const std::string name = path.string();
  if (!png_image_begin_read_from_file(&png, name.c_str())) {
    throw FormatError(name + ": " + png.message);
  }
  png.format = PNG_FORMAT_RGB;
  std::vector<std::uint8_t> raster(PNG_IMAGE_SIZE(png));
  if (!png_image_finish_read(&png, nullptr, raster.data(), 0, nullptr)) {
    png_image_free(&png);
    throw FormatError(name + ": " + png.message);
  }
  const int width = static_cast<int>(png.width);
  const int height = static_cast<int>(png.height);
  LoadedImage out;
  out.gray = Image<float>(width, height);
  out.color = Image<Rgb>(width, height);
  for (int y = 0; y < height; ++y) {
    for (int x = 0; x < width; ++x) {
      const std::size_t i = 3 * (static_cast<std::size_t>(y) * width + x);
      const Rgb c{raster[i], raster[i + 1], raster[i + 2]};
      out.color(x, y) = c;
      out.gray(x, y) = static_cast<float>(Luma(c));
    }
  }
  return out;
}

}  // namespace

double Luma(const Rgb& c) {
  return (0.299 * c.r + 0.587 * c.g + 0.114 * c.b) / 255.0;
}

LoadedImage LoadImageFile(const std::filesystem::path& path) {
  const std::string ext = path.extension().string();
  if (ext == ".png") return LoadPng(path);
  if (ext == ".pgm" || ext == ".ppm") return LoadPnm(path);
  throw FormatError(path.string() + ": unsupported image extension");
}

void SavePgm16(const Image<float>& image, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot write " + path.string());
  out << "P5\n" << image.width() << " " << image.height() << "\n65535\n";
  std::vector<char> raster;
  raster.reserve(image.size() * 2);
  for (float v : image.pixels()) {
    const auto q = static_cast<std::uint16_t>(
        std::lround(std::clamp(static_cast<double>(v), 0.0, 1.0) * 65535.0));
    raster.push_back(static_cast<char>(q >> 8));
    raster.push_back(static_cast<char>(q & 0xff));
  }
  out.write(raster.data(), static_cast<std::streamsize>(raster.size()));
}

void SavePgm8(const Image<std::uint8_t>& mask, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot write " + path.string());
  out << "P5\n" << mask.width() << " " << mask.height() << "\n255\n";
  out.write(reinterpret_cast<const char*>(mask.pixels().data()),
            static_cast<std::streamsize>(mask.size()));
}

}  // namespace ambc
