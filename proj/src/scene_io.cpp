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

#include "ambc/scene_io.hpp"

#include <algorithm>
#include <bit>
#include <charconv>
#include <cmath>
#include <fstream>
#include <iterator>
#include <map>
#include <sstream>

#include <Eigen/LU>

#include "ambc/errors.hpp"

namespace ambc {
namespace {

constexpr double kRotationTolerance = 1e-9;
constexpr char kMapMagic[4] = {'D', 'N', 'M', '1'};

template <typename T>
void AppendNumber(std::string& out, T value) {
  char buf[64];
  const auto result = std::to_chars(buf, buf + sizeof(buf), value);
  out.append(buf, result.ptr);
}

std::vector<double> ParseNumbers(std::string_view line, const std::string& source,
                                 int line_number) {
  std::vector<double> values;
  std::size_t pos = 0;
  while (pos < line.size()) {
    while (pos < line.size() && std::isspace(static_cast<unsigned char>(line[pos]))) ++pos;
    if (pos >= line.size()) break;
    std::size_t end = pos;
    while (end < line.size() && !std::isspace(static_cast<unsigned char>(line[end]))) ++end;
    double value = 0.0;
    const auto result = std::from_chars(line.data() + pos, line.data() + end, value);
    if (result.ec != std::errc() || result.ptr != line.data() + end) {
      throw ParseError(source, line_number,
                       "not a number: '" + std::string(line.substr(pos, end - pos)) + "'");
    }
    values.push_back(value);
    pos = end;
  }
  return values;
}

std::vector<std::uint8_t> ReadBytes(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot open " + path.string());
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

void WriteText(const std::filesystem::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot write " + path.string());
  out.write(text.data(), static_cast<std::streamsize>(text.size()));
}

void PutU32(std::vector<std::uint8_t>& out, std::uint32_t v) {
  for (int i = 0; i < 4; ++i) out.push_back(static_cast<std::uint8_t>(v >> (8 * i)));
}

std::uint32_t GetU32(std::span<const std::uint8_t> bytes, std::size_t at) {
  std::uint32_t v = 0;
  for (int i = 0; i < 4; ++i) v |= static_cast<std::uint32_t>(bytes[at + i]) << (8 * i);
  return v;
}

bool IsImageExtension(const std::string& ext) {
  return ext == ".png" || ext == ".pgm" || ext == ".ppm";
}

}  // namespace

void CameraView::Validate() const {
  const std::string who = name.empty() ? std::string("camera") : "camera " + name;
  const Eigen::Matrix3d gram = rotation * rotation.transpose();
  if ((gram - Eigen::Matrix3d::Identity()).cwiseAbs().maxCoeff() > kRotationTolerance) {
    throw ValidationError(who + ": rotation is not orthonormal");
  }
  if (std::abs(rotation.determinant() - 1.0) > kRotationTolerance) {
    throw ValidationError(who + ": rotation determinant is not +1");
  }
  if (!(fx() > 0.0) || !(fy() > 0.0)) {
    throw ValidationError(who + ": focal lengths must be positive");
  }
  if (intrinsics(1, 0) != 0.0 || intrinsics(2, 0) != 0.0 || intrinsics(2, 1) != 0.0 ||
      intrinsics(2, 2) != 1.0) {
    throw ValidationError(who + ": intrinsics must be upper triangular with K(2,2) = 1");
  }
  if (!image.empty()) {
    if (!(cx() >= 0.0 && cx() < width() && cy() >= 0.0 && cy() < height())) {
      throw ValidationError(who + ": principal point outside the image");
    }
  }
  if (!(depth_min > 0.0 && depth_min < depth_max) || !std::isfinite(depth_max)) {
    throw ValidationError(who + ": depth range must satisfy 0 < d_min < d_max");
  }
  if (!translation.allFinite()) throw ValidationError(who + ": non-finite translation");
}

void SceneDataset::Validate() const {
  if (views.size() < 2) {
    throw DatasetError("dataset '" + name + "' needs at least 2 views, found " +
                       std::to_string(views.size()));
  }
  if (views.size() > 64) throw DatasetError("at most 64 views are supported");
  for (const CameraView& view : views) {
    if (view.image.empty()) throw DatasetError("view " + view.name + " has no image");
    view.Validate();
  }
}

std::string FormatCamera(const CameraView& camera) {
  std::string out;
  auto row = [&](const auto& m, int r) {
    for (int c = 0; c < 3; ++c) {
      if (c) out.push_back(' ');
      AppendNumber(out, m(r, c));
    }
    out.push_back('\n');
  };
  for (int r = 0; r < 3; ++r) row(camera.intrinsics, r);
  for (int r = 0; r < 3; ++r) row(camera.rotation, r);
  for (int i = 0; i < 3; ++i) {
    if (i) out.push_back(' ');
    AppendNumber(out, camera.translation[i]);
  }
  out.push_back('\n');
  AppendNumber(out, camera.depth_min);
  out.push_back(' ');
  AppendNumber(out, camera.depth_max);
  out.push_back('\n');
  return out;
}

void ParseCamera(std::string_view text, const std::string& source_name,
                 CameraView& camera) {
  std::vector<std::vector<double>> rows;
  int line_number = 0;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    std::size_t end = text.find('\n', pos);
    if (end == std::string_view::npos) end = text.size();
    std::string_view line = text.substr(pos, end - pos);
    ++line_number;
    std::vector<double> values = ParseNumbers(line, source_name, line_number);
    if (!values.empty()) {
      const std::size_t expected = rows.size() < 7 ? 3 : 2;
      if (rows.size() >= 8) {
        throw ParseError(source_name, line_number, "unexpected trailing data");
      }
      if (values.size() != expected) {
        throw ParseError(source_name, line_number,
                         "expected " + std::to_string(expected) + " values, found " +
                             std::to_string(values.size()));
      }
      rows.push_back(std::move(values));
    }
    pos = end + 1;
  }
  if (rows.size() != 8) {
    throw ParseError(source_name, line_number,
                     "expected 8 rows (K, R, t, depth range), found " +
                         std::to_string(rows.size()));
  }
  for (int r = 0; r < 3; ++r) {
    for (int c = 0; c < 3; ++c) {
      camera.intrinsics(r, c) = rows[r][c];
      camera.rotation(r, c) = rows[3 + r][c];
    }
  }
  camera.translation = Eigen::Vector3d(rows[6][0], rows[6][1], rows[6][2]);
  camera.depth_min = rows[7][0];
  camera.depth_max = rows[7][1];
}

void SaveCamera(const CameraView& camera, const std::filesystem::path& path) {
  WriteText(path, FormatCamera(camera));
}

void LoadCamera(const std::filesystem::path& path, CameraView& camera) {
  const std::vector<std::uint8_t> bytes = ReadBytes(path);
  ParseCamera(std::string_view(reinterpret_cast<const char*>(bytes.data()), bytes.size()),
              path.string(), camera);
}

SceneDataset LoadDataset(const std::filesystem::path& dir) {
  namespace fs = std::filesystem;
  const fs::path image_dir = dir / "images";
  const fs::path camera_dir = dir / "cameras";
  if (!fs::is_directory(image_dir) || !fs::is_directory(camera_dir)) {
    throw DatasetError(dir.string() + ": expected images/ and cameras/ subdirectories");
  }
  std::map<std::string, fs::path> images;
  for (const auto& entry : fs::directory_iterator(image_dir)) {
    if (!entry.is_regular_file()) continue;
    const fs::path& p = entry.path();
    if (!IsImageExtension(p.extension().string())) continue;
    const std::string base = p.stem().string();
    if (!images.emplace(base, p).second) {
      throw DatasetError("duplicate image basename " + base);
    }
  }
  SceneDataset dataset;
  dataset.name = fs::absolute(dir).lexically_normal().filename().string();
  if (dataset.name.empty()) dataset.name = fs::absolute(dir).parent_path().filename().string();
  for (const auto& [base, image_path] : images) {
    const fs::path camera_path = camera_dir / (base + ".txt");
    if (!fs::is_regular_file(camera_path)) {
      throw DatasetError("missing camera file for image " + base);
    }
    CameraView view;
    view.name = base;
    LoadedImage loaded = LoadImageFile(image_path);
    view.image = std::move(loaded.gray);
    view.color = std::move(loaded.color);
    LoadCamera(camera_path, view);
    dataset.views.push_back(std::move(view));
  }
  dataset.Validate();
  return dataset;
}

void SaveDataset(const SceneDataset& dataset, const std::filesystem::path& dir) {
  namespace fs = std::filesystem;
  fs::create_directories(dir / "images");
  fs::create_directories(dir / "cameras");
  for (const CameraView& view : dataset.views) {
    if (view.color.empty()) {
      SavePgm16(view.image, dir / "images" / (view.name + ".pgm"));
    } else {
      std::ofstream out(dir / "images" / (view.name + ".ppm"), std::ios::binary);
      out << "P6\n" << view.width() << " " << view.height() << "\n255\n";
      for (const Rgb& c : view.color.pixels()) {
        out.put(static_cast<char>(c.r)).put(static_cast<char>(c.g)).put(static_cast<char>(c.b));
      }
    }
    SaveCamera(view, dir / "cameras" / (view.name + ".txt"));
  }
}

std::vector<std::uint8_t> EncodeMap(const DepthNormalMap& map) {
  const std::size_t n = map.depth.size();
  std::vector<std::uint8_t> out;
  out.reserve(12 + n * 21);
  out.insert(out.end(), std::begin(kMapMagic), std::end(kMapMagic));
  PutU32(out, static_cast<std::uint32_t>(map.width()));
  PutU32(out, static_cast<std::uint32_t>(map.height()));
  auto plane = [&](auto&& value_at) {
    for (std::size_t i = 0; i < n; ++i) PutU32(out, std::bit_cast<std::uint32_t>(value_at(i)));
  };
  plane([&](std::size_t i) { return map.depth.pixels()[i]; });
  for (int c = 0; c < 3; ++c) plane([&](std::size_t i) { return map.normal.pixels()[i][c]; });
  plane([&](std::size_t i) { return map.fitness.pixels()[i]; });
  for (std::uint8_t v : map.validated.pixels()) out.push_back(v);
  return out;
}

DepthNormalMap DecodeMap(std::span<const std::uint8_t> bytes) {
  if (bytes.size() < 4) throw LengthError("map file shorter than its magic");
  if (!std::equal(std::begin(kMapMagic), std::end(kMapMagic), bytes.begin())) {
    throw FormatError("bad map magic (expected DNM1)");
  }
  if (bytes.size() < 12) throw LengthError("map header truncated");
  const std::uint32_t width = GetU32(bytes, 4);
  const std::uint32_t height = GetU32(bytes, 8);
  const std::size_t n = static_cast<std::size_t>(width) * height;
  const std::size_t expected = 12 + n * 21;
  if (bytes.size() < expected) {
    throw LengthError("map data truncated: " + std::to_string(bytes.size()) + " of " +
                      std::to_string(expected) + " bytes");
  }
  if (bytes.size() > expected) throw FormatError("trailing bytes after map data");
  DepthNormalMap map(static_cast<int>(width), static_cast<int>(height));
  std::size_t at = 12;
  auto plane = [&](auto&& store) {
    for (std::size_t i = 0; i < n; ++i, at += 4) store(i, std::bit_cast<float>(GetU32(bytes, at)));
  };
  plane([&](std::size_t i, float v) { map.depth.pixels()[i] = v; });
  for (int c = 0; c < 3; ++c) {
    plane([&](std::size_t i, float v) { map.normal.pixels()[i][c] = v; });
  }
  plane([&](std::size_t i, float v) { map.fitness.pixels()[i] = v; });
  for (std::size_t i = 0; i < n; ++i) map.validated.pixels()[i] = bytes[at++];
  return map;
}

void SaveMap(const DepthNormalMap& map, const std::filesystem::path& path) {
  const std::vector<std::uint8_t> bytes = EncodeMap(map);
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot write " + path.string());
  out.write(reinterpret_cast<const char*>(bytes.data()),
            static_cast<std::streamsize>(bytes.size()));
}

DepthNormalMap LoadMap(const std::filesystem::path& path) {
  return DecodeMap(ReadBytes(path));
}

std::string FormatPly(const FusedPointCloud& cloud) {
  std::string out =
      "ply\nformat ascii 1.0\nelement vertex " + std::to_string(cloud.size()) +
      "\nproperty float x\nproperty float y\nproperty float z\n"
      "property float nx\nproperty float ny\nproperty float nz\n"
      "property uchar red\nproperty uchar green\nproperty uchar blue\nend_header\n";
  for (std::size_t i = 0; i < cloud.points.size(); ++i) {
    const FusedPoint& p = cloud.points[i];
    if (!p.position.allFinite()) throw ExportError(i, "non-finite position");
    if (!p.normal.allFinite()) throw ExportError(i, "non-finite normal");
    for (int c = 0; c < 3; ++c) {
      AppendNumber(out, static_cast<float>(p.position[c]));
      out.push_back(' ');
    }
    for (int c = 0; c < 3; ++c) {
      AppendNumber(out, static_cast<float>(p.normal[c]));
      out.push_back(' ');
    }
    AppendNumber(out, static_cast<int>(p.color.r));
    out.push_back(' ');
    AppendNumber(out, static_cast<int>(p.color.g));
    out.push_back(' ');
    AppendNumber(out, static_cast<int>(p.color.b));
    out.push_back('\n');
  }
  return out;
}

void ExportPly(const FusedPointCloud& cloud, const std::filesystem::path& path) {
  WriteText(path, FormatPly(cloud));
}

FusedPointCloud ImportPly(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open " + path.string());
  std::string line;
  std::size_t count = 0;
  bool counted = false;
  int line_number = 0;
  while (std::getline(in, line)) {
    ++line_number;
    if (line.rfind("element vertex ", 0) == 0) {
      count = std::stoul(line.substr(15));
      counted = true;
    }
    if (line == "end_header") break;
  }
  if (!counted) throw ParseError(path.string(), line_number, "missing vertex count");
  FusedPointCloud cloud;
  cloud.points.reserve(count);
  for (std::size_t i = 0; i < count; ++i) {
    if (!std::getline(in, line)) {
      throw ParseError(path.string(), line_number, "fewer vertices than declared");
    }
    ++line_number;
    const std::vector<double> v = ParseNumbers(line, path.string(), line_number);
    if (v.size() != 9) throw ParseError(path.string(), line_number, "expected 9 values");
    FusedPoint p;
    p.position = Eigen::Vector3d(v[0], v[1], v[2]);
    p.normal = Eigen::Vector3d(v[3], v[4], v[5]);
    p.color = {static_cast<std::uint8_t>(v[6]), static_cast<std::uint8_t>(v[7]),
               static_cast<std::uint8_t>(v[8])};
    cloud.points.push_back(p);
  }
  return cloud;
}

}  // namespace ambc
