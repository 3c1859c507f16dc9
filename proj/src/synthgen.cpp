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

#include "ambc/synthgen.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <numbers>
#include <sstream>

#include "ambc/errors.hpp"
#include "ambc/rng.hpp"

namespace ambc {
namespace {

double LatticeValue(std::uint64_t seed, std::int64_t ix, std::int64_t iy) {
  const std::uint64_t h =
      MixKey(seed, {static_cast<std::uint64_t>(ix), static_cast<std::uint64_t>(iy)});
  return static_cast<double>(h >> 11) * 0x1.0p-53;
}

double SmoothStep(double t) { return t * t * (3.0 - 2.0 * t); }

double ValueNoise(std::uint64_t seed, double u, double v) {
  const double fu = std::floor(u);
  const double fv = std::floor(v);
  const auto iu = static_cast<std::int64_t>(fu);
  const auto iv = static_cast<std::int64_t>(fv);
  const double su = SmoothStep(u - fu);
  const double sv = SmoothStep(v - fv);
  const double top = (1.0 - su) * LatticeValue(seed, iu, iv) + su * LatticeValue(seed, iu + 1, iv);
  const double bottom =
      (1.0 - su) * LatticeValue(seed, iu, iv + 1) + su * LatticeValue(seed, iu + 1, iv + 1);
  return (1.0 - sv) * top + sv * bottom;
}

Eigen::Vector3d FacingNormal(const Eigen::Vector3d& tilt_axis, double tilt_deg) {
  const double t = tilt_deg * std::numbers::pi / 180.0;
  return (std::sin(t) * tilt_axis.normalized() - std::cos(t) * Eigen::Vector3d::UnitZ())
      .normalized();
}

// Quad through `center` with the given normal; axis_u stays horizontal.
Quad OrientedQuad(const Eigen::Vector3d& center, const Eigen::Vector3d& normal, double half_u,
                  double half_v, const Texture& texture) {
  Quad q;
  q.center = center;
  q.axis_v = normal.cross(Eigen::Vector3d::UnitX()).normalized();
  q.axis_u = q.axis_v.cross(normal).normalized();
  q.half_u = half_u;
  q.half_v = half_v;
  q.texture = texture;
  return q;
}

Texture NoiseTexture(std::uint64_t seed) {
  Texture t;
  t.kind = TextureKind::kNoise;
  t.cell = 0.03;
  t.seed = seed;
  return t;
}

}  // namespace

bool Texture::IsFlat(double u, double v) const {
  return kind == TextureKind::kConstant ||
         (flat_region && flat_region->contains(Eigen::Vector2d(u, v)));
}

double Texture::Sample(double u, double v) const {
  if (IsFlat(u, v)) return value;
  switch (kind) {
    case TextureKind::kChecker: {
      const auto iu = static_cast<std::int64_t>(std::floor(u / cell));
      const auto iv = static_cast<std::int64_t>(std::floor(v / cell));
      return ((iu + iv) & 1) ? 0.8 : 0.2;
    }
    case TextureKind::kNoise: {
      const double fine = ValueNoise(seed, u / cell, v / cell);
      const double coarse = ValueNoise(seed ^ 0x5bd1e995ULL, u / (2.0 * cell), v / (2.0 * cell));
      return 0.1 + 0.8 * (0.6 * fine + 0.4 * coarse);
    }
    case TextureKind::kConstant:
      break;
  }
  return value;
}

std::optional<SurfaceHit> SceneGeometry::Intersect(const Eigen::Vector3d& origin,
                                                   const Eigen::Vector3d& direction) const {
  std::optional<SurfaceHit> best;
  auto consider = [&](double s, int surface) {
    return s > 1e-9 && (!best || s < best->distance) && surface >= 0;
  };
  for (std::size_t i = 0; i < quads.size(); ++i) {
    const Quad& q = quads[i];
    const Eigen::Vector3d n = q.Normal();
    const double denom = n.dot(direction);
    if (std::abs(denom) < 1e-15) continue;
    const double s = n.dot(q.center - origin) / denom;
    if (!consider(s, static_cast<int>(i))) continue;
    const Eigen::Vector3d p = origin + s * direction;
    const double u = (p - q.center).dot(q.axis_u);
    const double v = (p - q.center).dot(q.axis_v);
    if (std::abs(u) > q.half_u || std::abs(v) > q.half_v) continue;
    best = SurfaceHit{s, p, n.normalized(), q.texture.Sample(u, v), q.texture.IsFlat(u, v),
                      static_cast<int>(i)};
  }
  for (std::size_t i = 0; i < spheres.size(); ++i) {
    const Sphere& sp = spheres[i];
    const Eigen::Vector3d oc = origin - sp.center;
    const double a = direction.squaredNorm();
    const double b = oc.dot(direction);
    const double c = oc.squaredNorm() - sp.radius * sp.radius;
    const double disc = b * b - a * c;
    if (disc < 0.0) continue;
    const double root = std::sqrt(disc);
    double s = (-b - root) / a;
    if (s <= 1e-9) s = (-b + root) / a;
    const int id = static_cast<int>(quads.size() + i);
    if (!consider(s, id)) continue;
    const Eigen::Vector3d p = origin + s * direction;
    const Eigen::Vector3d d = (p - sp.center) / sp.radius;
    const double u = sp.radius * std::atan2(d.y(), d.x());
    const double v = sp.radius * std::acos(std::clamp(d.z(), -1.0, 1.0));
    best = SurfaceHit{s, p, d.normalized(), sp.texture.Sample(u, v), sp.texture.IsFlat(u, v), id};
  }
  return best;
}

double SceneGeometry::DistanceToSurface(const Eigen::Vector3d& point) const {
  double best = std::numeric_limits<double>::infinity();
  for (const Quad& q : quads) {
    const Eigen::Vector3d d = point - q.center;
    const double u = std::clamp(d.dot(q.axis_u), -q.half_u, q.half_u);
    const double v = std::clamp(d.dot(q.axis_v), -q.half_v, q.half_v);
    best = std::min(best, (point - (q.center + u * q.axis_u + v * q.axis_v)).norm());
  }
  for (const Sphere& s : spheres) {
    best = std::min(best, std::abs((point - s.center).norm() - s.radius));
  }
  return best;
}

std::vector<Eigen::Vector3d> SceneGeometry::SampleSurfaces(double spacing) const {
  std::vector<Eigen::Vector3d> out;
  for (const Quad& q : quads) {
    const int nu = std::max(1, static_cast<int>(std::ceil(2.0 * q.half_u / spacing)));
    const int nv = std::max(1, static_cast<int>(std::ceil(2.0 * q.half_v / spacing)));
    for (int j = 0; j < nv; ++j) {
      for (int i = 0; i < nu; ++i) {
        const double u = -q.half_u + (i + 0.5) * 2.0 * q.half_u / nu;
        const double v = -q.half_v + (j + 0.5) * 2.0 * q.half_v / nv;
        out.push_back(q.center + u * q.axis_u + v * q.axis_v);
      }
    }
  }
  for (const Sphere& s : spheres) {
    const double area = 4.0 * std::numbers::pi * s.radius * s.radius;
    const int n = std::max(1, static_cast<int>(std::ceil(area / (spacing * spacing))));
    const double golden = std::numbers::pi * (3.0 - std::sqrt(5.0));
    for (int i = 0; i < n; ++i) {
      const double z = 1.0 - 2.0 * (i + 0.5) / n;
      const double r = std::sqrt(1.0 - z * z);
      const double phi = golden * i;
      out.push_back(s.center + s.radius * Eigen::Vector3d(r * std::cos(phi), r * std::sin(phi), z));
    }
  }
  return out;
}

std::vector<CameraView> MakeRingRig(const RigOptions& options) {
  if (options.views < 2) throw ValidationError("a synthetic rig needs at least 2 views");
  if (options.width < 1 || options.height < 1) throw ValidationError("empty image size");
  const double alpha = options.ring_half_angle_deg * std::numbers::pi / 180.0;
  const double f = options.focal_scale * options.width;
  std::vector<CameraView> views(options.views);
  for (int k = 0; k < options.views; ++k) {
    const double phi = 2.0 * std::numbers::pi * k / options.views;
    const Eigen::Vector3d center =
        options.distance * Eigen::Vector3d(std::sin(alpha) * std::cos(phi),
                                           std::sin(alpha) * std::sin(phi), -std::cos(alpha));
    // Smallest rotation taking the ring axis onto the viewing direction, so
    // neighboring images are not rolled against each other.
    const Eigen::Vector3d z = (-center).normalized();
    const Eigen::Matrix3d to_world =
        Eigen::Quaterniond::FromTwoVectors(Eigen::Vector3d::UnitZ(), z).toRotationMatrix();
    CameraView& v = views[k];
    char name[16];
    std::snprintf(name, sizeof(name), "%04d", k);
    v.name = name;
    v.rotation = to_world.transpose();
    v.translation = -v.rotation * center;
    v.intrinsics << f, 0.0, 0.5 * (options.width - 1), 0.0, f, 0.5 * (options.height - 1), 0.0,
        0.0, 1.0;
    v.image = Image<float>(options.width, options.height, 0.0f);
  }
  return views;
}

void RenderScene(SyntheticScene& scene) {
  const int n = static_cast<int>(scene.views.size());
  scene.ground_truth.assign(n, {});
  scene.exact_depth.assign(n, {});
  scene.occlusion.assign(n, {});
  scene.flat.assign(n, {});
  std::vector<Image<std::uint8_t>> hit_mask(n);

  for (int i = 0; i < n; ++i) {
    CameraView& view = scene.views[i];
    const int w = view.width();
    const int h = view.height();
    DepthNormalMap gt(w, h);
    Image<double> exact(w, h, 0.0);
    Image<std::uint8_t> flat(w, h, 0);
    hit_mask[i] = Image<std::uint8_t>(w, h, 0);
    const Eigen::Vector3d origin = view.Center();
    const Eigen::Matrix3d to_world = view.rotation.transpose();
    double lo = std::numeric_limits<double>::infinity();
    double hi = 0.0;
#pragma omp parallel for schedule(static) reduction(min : lo) reduction(max : hi)
    for (int y = 0; y < h; ++y) {
      for (int x = 0; x < w; ++x) {
        const Eigen::Vector3d ray = view.Ray(x, y);
        const auto hit = scene.geometry.Intersect(origin, to_world * ray);
        if (!hit) continue;
        Eigen::Vector3d normal = view.rotation * hit->normal;
        if (normal.dot(ray) > 0.0) normal = -normal;
        view.image(x, y) = static_cast<float>(hit->intensity);
        exact(x, y) = hit->distance;
        gt.depth(x, y) = static_cast<float>(hit->distance);
        gt.normal(x, y) = normal.cast<float>();
        gt.fitness(x, y) = 1.0f;
        gt.validated(x, y) = 1;
        flat(x, y) = hit->flat ? 1 : 0;
        hit_mask[i](x, y) = 1;
        lo = std::min(lo, hit->distance);
        hi = std::max(hi, hit->distance);
      }
    }
    if (!(hi > 0.0)) throw ValidationError("view " + view.name + " sees no surface");
    view.depth_min = 0.8 * lo;
    view.depth_max = 1.2 * hi;
    scene.ground_truth[i] = std::move(gt);
    scene.exact_depth[i] = std::move(exact);
    scene.flat[i] = std::move(flat);
  }

  for (int i = 0; i < n; ++i) {
    const CameraView& view = scene.views[i];
    Image<std::uint8_t> mask(view.width(), view.height(), 0);
#pragma omp parallel for schedule(static)
    for (int y = 0; y < view.height(); ++y) {
      for (int x = 0; x < view.width(); ++x) {
        if (!hit_mask[i](x, y)) continue;
        const Eigen::Vector3d point = view.Backproject(x, y, scene.exact_depth[i](x, y));
        for (int j = 0; j < n && !mask(x, y); ++j) {
          if (j == i) continue;
          const CameraView& other = scene.views[j];
          const Eigen::Vector3d cam = other.WorldToCamera(point);
          if (!(cam.z() > 0.0)) continue;
          const Eigen::Vector2d p = other.ProjectCamera(cam);
          if (p.x() < -0.5 || p.y() < -0.5 || p.x() >= other.width() - 0.5 ||
              p.y() >= other.height() - 0.5) {
            continue;
          }
          const Eigen::Vector3d origin = other.Center();
          const auto hit = scene.geometry.Intersect(origin, point - origin);
          if (hit && hit->distance < 1.0 - 1e-6) mask(x, y) = 1;
        }
      }
    }
    scene.occlusion[i] = std::move(mask);
  }
}

SyntheticScene MakePlaneScene(const RigOptions& options, std::uint64_t seed) {
  SyntheticScene scene;
  scene.name = "plane";
  scene.views = MakeRingRig(options);
  const Eigen::Vector3d normal = FacingNormal(Eigen::Vector3d(std::cos(0), std::sin(0), 0.0), 10.0);
  scene.geometry.quads.push_back(
      OrientedQuad(Eigen::Vector3d::Zero(), normal, 1.5, 1.5, NoiseTexture(seed)));
  RenderScene(scene);
  return scene;
}

SyntheticScene MakeOcclusionScene(const RigOptions& options, std::uint64_t seed,
                                  OccluderPlacement placement) {
  SyntheticScene scene;
  scene.name = "occlusion";
  scene.views = MakeRingRig(options);
  const Eigen::Vector3d back_normal = FacingNormal(Eigen::Vector3d::UnitX(), 15.0);
  scene.geometry.quads.push_back(
      OrientedQuad(Eigen::Vector3d::Zero(), back_normal, 1.5, 1.5, NoiseTexture(seed)));
  Texture front = NoiseTexture(seed + 1);
  front.cell = 0.02;
  if (placement == OccluderPlacement::kAllViews) {
    scene.geometry.quads.push_back(OrientedQuad(Eigen::Vector3d(0.0, 0.0, -0.5),
                                                -Eigen::Vector3d::UnitZ(), 0.04, 0.25, front));
  } else {
    const CameraView& first = scene.views.front();
    const Eigen::Vector3d axis = first.rotation.row(2).transpose();
    scene.geometry.quads.push_back(
        OrientedQuad(first.Center() + 0.5 * axis, -axis, 0.03, 0.03, front));
  }
  RenderScene(scene);
  return scene;
}

SyntheticScene MakeTexturelessScene(const RigOptions& options, std::uint64_t seed) {
  SyntheticScene scene;
  scene.name = "textureless";
  scene.views = MakeRingRig(options);
  Texture texture = NoiseTexture(seed);
  texture.value = 0.5;
  texture.flat_region = Eigen::AlignedBox2d(Eigen::Vector2d(-0.22, -0.15),
                                            Eigen::Vector2d(0.22, 0.15));
  const Eigen::Vector3d normal = FacingNormal(Eigen::Vector3d(std::cos(0.5), std::sin(0.5), 0.0), 25.0);
  scene.geometry.quads.push_back(
      OrientedQuad(Eigen::Vector3d::Zero(), normal, 1.5, 1.5, texture));
  RenderScene(scene);
  return scene;
}

std::string FormatGeometry(const SceneGeometry& geometry) {
  std::ostringstream out;
  out.precision(17);
  for (const Quad& q : geometry.quads) {
    out << "quad " << q.center.x() << ' ' << q.center.y() << ' ' << q.center.z() << ' '
        << q.axis_u.x() << ' ' << q.axis_u.y() << ' ' << q.axis_u.z() << ' ' << q.axis_v.x()
        << ' ' << q.axis_v.y() << ' ' << q.axis_v.z() << ' ' << q.half_u << ' ' << q.half_v
        << '\n';
  }
  for (const Sphere& s : geometry.spheres) {
    out << "sphere " << s.center.x() << ' ' << s.center.y() << ' ' << s.center.z() << ' '
        << s.radius << '\n';
  }
  return out.str();
}

SceneGeometry ParseGeometry(const std::string& text, const std::string& source_name) {
  SceneGeometry geometry;
  std::istringstream in(text);
  std::string line;
  int line_number = 0;
  while (std::getline(in, line)) {
    ++line_number;
    std::istringstream fields(line);
    std::string kind;
    if (!(fields >> kind) || kind.front() == '#') continue;
    if (kind == "quad") {
      Quad q;
      if (!(fields >> q.center.x() >> q.center.y() >> q.center.z() >> q.axis_u.x() >>
            q.axis_u.y() >> q.axis_u.z() >> q.axis_v.x() >> q.axis_v.y() >> q.axis_v.z() >>
            q.half_u >> q.half_v)) {
        throw ParseError(source_name, line_number, "quad needs 11 numbers");
      }
      geometry.quads.push_back(q);
    } else if (kind == "sphere") {
      Sphere s;
      if (!(fields >> s.center.x() >> s.center.y() >> s.center.z() >> s.radius)) {
        throw ParseError(source_name, line_number, "sphere needs 4 numbers");
      }
      geometry.spheres.push_back(s);
    } else {
      throw ParseError(source_name, line_number, "unknown surface '" + kind + "'");
    }
  }
  return geometry;
}

namespace {

Image<std::uint8_t> MaskToGray(const Image<std::uint8_t>& mask) {
  Image<std::uint8_t> gray(mask.width(), mask.height(), 0);
  for (int y = 0; y < mask.height(); ++y) {
    for (int x = 0; x < mask.width(); ++x) gray(x, y) = mask(x, y) ? 255 : 0;
  }
  return gray;
}

}  // namespace

void SaveScene(const SyntheticScene& scene, const std::filesystem::path& dir) {
  SaveDataset(scene.ToDataset(), dir);
  const std::filesystem::path gt = dir / "gt";
  std::filesystem::create_directories(gt);
  for (std::size_t i = 0; i < scene.views.size(); ++i) {
    const std::string& name = scene.views[i].name;
    SaveMap(scene.ground_truth[i], gt / (name + ".dnm"));
    SavePgm8(MaskToGray(scene.occlusion[i]), gt / ("occlusion_" + name + ".pgm"));
    SavePgm8(MaskToGray(scene.flat[i]), gt / ("flat_" + name + ".pgm"));
  }
  std::ofstream out(gt / "geometry.txt");
  out << FormatGeometry(scene.geometry);
  if (!out) throw DatasetError("cannot write " + (gt / "geometry.txt").string());
}

namespace {

Image<std::uint8_t> LoadMask(const std::filesystem::path& path) {
  const Image<float> gray = LoadImageFile(path).gray;
  Image<std::uint8_t> mask(gray.width(), gray.height(), 0);
  for (int y = 0; y < gray.height(); ++y) {
    for (int x = 0; x < gray.width(); ++x) mask(x, y) = gray(x, y) > 0.5f ? 1 : 0;
  }
  return mask;
}

}  // namespace

GroundTruth LoadGroundTruth(const std::filesystem::path& dir,
                            std::span<const CameraView> views) {
  const std::filesystem::path gt = dir / "gt";
  std::ifstream in(gt / "geometry.txt");
  if (!in) throw DatasetError("missing ground truth geometry in " + gt.string());
  std::stringstream text;
  text << in.rdbuf();
  GroundTruth truth;
  truth.geometry = ParseGeometry(text.str(), (gt / "geometry.txt").string());
  for (const CameraView& view : views) {
    truth.maps.push_back(LoadMap(gt / (view.name + ".dnm")));
    truth.occlusion.push_back(LoadMask(gt / ("occlusion_" + view.name + ".pgm")));
    truth.flat.push_back(LoadMask(gt / ("flat_" + view.name + ".pgm")));
  }
  return truth;
}

}  // namespace ambc
