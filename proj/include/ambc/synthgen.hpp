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

#include <cstdint>
#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include <Eigen/Core>
#include <Eigen/Geometry>

#include "ambc/camera.hpp"
#include "ambc/depth_map.hpp"
#include "ambc/image.hpp"
#include "ambc/scene_io.hpp"

namespace ambc {

enum class TextureKind { kChecker, kNoise, kConstant };

// Intensity pattern over a surface's (u, v) parameterization, in world units.
struct Texture {
  TextureKind kind = TextureKind::kNoise;
  double cell = 0.03;
  double value = 0.5;  // constant level, also used inside flat_region
  std::uint64_t seed = 1;
  std::optional<Eigen::AlignedBox2d> flat_region;

  bool IsFlat(double u, double v) const;
  double Sample(double u, double v) const;
};

struct Quad {
  Eigen::Vector3d center = Eigen::Vector3d::Zero();
  Eigen::Vector3d axis_u = Eigen::Vector3d::UnitX();  // unit, orthogonal to axis_v
  Eigen::Vector3d axis_v = Eigen::Vector3d::UnitY();
  double half_u = 1.0;
  double half_v = 1.0;
  Texture texture;

  Eigen::Vector3d Normal() const { return axis_u.cross(axis_v); }
};

struct Sphere {
  Eigen::Vector3d center = Eigen::Vector3d::Zero();
  double radius = 1.0;
  Texture texture;
};

struct SurfaceHit {
  double distance = 0.0;   // ray parameter, in units of the direction vector
  Eigen::Vector3d point;   // world
  Eigen::Vector3d normal;  // world, unit, unoriented
  double intensity = 0.0;
  bool flat = false;
  int surface = -1;  // quads first, then spheres
};

struct SceneGeometry {
  std::vector<Quad> quads;
  std::vector<Sphere> spheres;

  // Nearest hit with positive parameter.
  std::optional<SurfaceHit> Intersect(const Eigen::Vector3d& origin,
                                      const Eigen::Vector3d& direction) const;
  double DistanceToSurface(const Eigen::Vector3d& point) const;
  // Roughly uniform samples with the given spacing over every surface.
  std::vector<Eigen::Vector3d> SampleSurfaces(double spacing) const;
};

struct SyntheticScene {
  std::string name;
  SceneGeometry geometry;
  std::vector<CameraView> views;
  std::vector<DepthNormalMap> ground_truth;
  std::vector<Image<double>> exact_depth;  // 0 where the ray misses
  // Pixels whose surface point is hidden behind another surface in some
  // other view that sees it in-bounds.
  std::vector<Image<std::uint8_t>> occlusion;
  // Pixels whose surface point lies in a constant-texture region.
  std::vector<Image<std::uint8_t>> flat;

  SceneDataset ToDataset() const { return {name, views}; }
};

struct RigOptions {
  int views = 5;
  int width = 160;
  int height = 120;
  double distance = 2.0;  // camera center to the look-at point (origin)
  // Cone half-angle of the camera ring. With 2 to 5 views every pairwise
  // triangulation angle at the origin lies inside [10, 30] degrees.
  double ring_half_angle_deg = 9.0;
  double focal_scale = 2.0;  // fx = fy = focal_scale * width
};

// Cameras on a ring around the -z axis, all looking at the origin. Images
// and depth ranges are filled by RenderScene.
std::vector<CameraView> MakeRingRig(const RigOptions& options);

// Ray casts every view at pixel centers; fills images, ground truth, depth
// ranges ([0.8, 1.2] times the observed depth extent) and masks.
void RenderScene(SyntheticScene& scene);

SyntheticScene MakePlaneScene(const RigOptions& options, std::uint64_t seed);

enum class OccluderPlacement {
  kAllViews,        // floating bar in front of the background, seen by every view
  kFirstViewOnly,   // small quad just in front of view 0, outside the other frusta
};
SyntheticScene MakeOcclusionScene(const RigOptions& options, std::uint64_t seed,
                                  OccluderPlacement placement = OccluderPlacement::kAllViews);

SyntheticScene MakeTexturelessScene(const RigOptions& options, std::uint64_t seed);

// Dataset layout plus <dir>/gt/: NNNN.dnm, occlusion_NNNN.pgm, flat_NNNN.pgm
// and geometry.txt.
void SaveScene(const SyntheticScene& scene, const std::filesystem::path& dir);

std::string FormatGeometry(const SceneGeometry& geometry);
SceneGeometry ParseGeometry(const std::string& text, const std::string& source_name);

struct GroundTruth {
  SceneGeometry geometry;
  std::vector<DepthNormalMap> maps;
  std::vector<Image<std::uint8_t>> occlusion;
  std::vector<Image<std::uint8_t>> flat;
};
// Ground truth for the named views of a saved scene.
GroundTruth LoadGroundTruth(const std::filesystem::path& dir,
                            std::span<const CameraView> views);

}  // namespace ambc
