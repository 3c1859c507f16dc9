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

#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include "ambc/camera.hpp"
#include "ambc/depth_map.hpp"
#include "ambc/point_cloud.hpp"

namespace ambc {

struct SceneDataset {
  std::string name;
  std::vector<CameraView> views;

  // Throws ValidationError / DatasetError.
  void Validate() const;
};

// <dir>/images/NNNN.{png,pgm,ppm} paired with <dir>/cameras/NNNN.txt.
SceneDataset LoadDataset(const std::filesystem::path& dir);
void SaveDataset(const SceneDataset& dataset, const std::filesystem::path& dir);

// Camera text format: three rows of K, three rows of R, t, "d_min d_max".
// Values are written in shortest round-trip form, so parse(format(c)) == c.
std::string FormatCamera(const CameraView& camera);
// Fills intrinsics, pose and depth range; image is left untouched.
void ParseCamera(std::string_view text, const std::string& source_name,
                 CameraView& camera);
void SaveCamera(const CameraView& camera, const std::filesystem::path& path);
void LoadCamera(const std::filesystem::path& path, CameraView& camera);

// DNM1 binary map: "DNM1", u32 LE width, u32 LE height, then f32 LE planes
// (depth, nx, ny, nz, fitness) and one byte per pixel for validated.
std::vector<std::uint8_t> EncodeMap(const DepthNormalMap& map);
DepthNormalMap DecodeMap(std::span<const std::uint8_t> bytes);
void SaveMap(const DepthNormalMap& map, const std::filesystem::path& path);
DepthNormalMap LoadMap(const std::filesystem::path& path);

// ASCII PLY with x y z nx ny nz red green blue per vertex.
void ExportPly(const FusedPointCloud& cloud, const std::filesystem::path& path);
std::string FormatPly(const FusedPointCloud& cloud);
FusedPointCloud ImportPly(const std::filesystem::path& path);

// Image files. Gray output in [0, 1]; color kept only for RGB sources.
struct LoadedImage {
  Image<float> gray;
  Image<Rgb> color;
};
LoadedImage LoadImageFile(const std::filesystem::path& path);
// 16-bit binary PGM.
void SavePgm16(const Image<float>& image, const std::filesystem::path& path);
void SavePgm8(const Image<std::uint8_t>& mask, const std::filesystem::path& path);

double Luma(const Rgb& c);

}  // namespace ambc
