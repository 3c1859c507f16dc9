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

#include "ambc/evaluate.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include <boost/geometry.hpp>
#include <boost/geometry/index/rtree.hpp>

#include "ambc/errors.hpp"

namespace ambc {
namespace {

namespace bg = boost::geometry;
namespace bgi = boost::geometry::index;
using BoostPoint = bg::model::point<double, 3, bg::cs::cartesian>;

double Quantile(const std::vector<double>& sorted, double q) {
  if (sorted.empty()) return 0.0;
  const double pos = q * (sorted.size() - 1);
  const auto lo = static_cast<std::size_t>(std::floor(pos));
  const std::size_t hi = std::min(lo + 1, sorted.size() - 1);
  return sorted[lo] + (pos - lo) * (sorted[hi] - sorted[lo]);
}

}  // namespace

DepthErrorStats ComputeDepthErrorStats(std::span<const DepthNormalMap> maps,
                                       std::span<const DepthNormalMap> ground_truth,
                                       std::span<const Image<std::uint8_t>> masks,
                                       bool validated_only) {
  if (maps.size() != ground_truth.size() || (!masks.empty() && masks.size() != maps.size())) {
    throw ValidationError("depth error statistics need matching map counts");
  }
  std::vector<double> errors;
  for (std::size_t v = 0; v < maps.size(); ++v) {
    const DepthNormalMap& m = maps[v];
    const DepthNormalMap& gt = ground_truth[v];
    for (int y = 0; y < m.height(); ++y) {
      for (int x = 0; x < m.width(); ++x) {
        if (!gt.validated(x, y) || !(gt.depth(x, y) > 0.0f)) continue;
        if (validated_only && !m.validated(x, y)) continue;
        if (!masks.empty() && !masks[v](x, y)) continue;
        const double d = m.depth(x, y);
        const double g = gt.depth(x, y);
        errors.push_back(std::abs(d - g) / g);
      }
    }
  }
  DepthErrorStats stats;
  stats.count = errors.size();
  if (errors.empty()) return stats;
  std::sort(errors.begin(), errors.end());
  double sum = 0.0;
  std::size_t within = 0;
  for (double e : errors) {
    sum += e;
    within += e < 0.01;
  }
  stats.mean = sum / errors.size();
  stats.median = Quantile(errors, 0.5);
  stats.p90 = Quantile(errors, 0.9);
  stats.p95 = Quantile(errors, 0.95);
  stats.within_1_percent = static_cast<double>(within) / errors.size();
  return stats;
}

std::vector<Eigen::Vector3d> ObservedSurfaceSamples(const SceneGeometry& geometry,
                                                    std::span<const CameraView> views,
                                                    const EvalOptions& options) {
  const std::vector<Eigen::Vector3d> samples = geometry.SampleSurfaces(options.sample_spacing);
  std::vector<std::uint8_t> keep(samples.size(), 0);
#pragma omp parallel for schedule(static)
  for (std::size_t i = 0; i < samples.size(); ++i) {
    int observers = 0;
    for (const CameraView& view : views) {
      const Eigen::Vector3d cam = view.WorldToCamera(samples[i]);
      if (!(cam.z() > 0.0)) continue;
      const Eigen::Vector2d p = view.ProjectCamera(cam);
      if (p.x() < -0.5 || p.y() < -0.5 || p.x() >= view.width() - 0.5 ||
          p.y() >= view.height() - 0.5) {
        continue;
      }
      const Eigen::Vector3d origin = view.Center();
      const auto hit = geometry.Intersect(origin, samples[i] - origin);
      if (hit && hit->distance < 1.0 - 1e-6) continue;
      ++observers;
    }
    keep[i] = observers >= options.min_observing_views;
  }
  std::vector<Eigen::Vector3d> out;
  for (std::size_t i = 0; i < samples.size(); ++i) {
    if (keep[i]) out.push_back(samples[i]);
  }
  return out;
}

EvalReport Evaluate(const FusedPointCloud& cloud, std::span<const DepthNormalMap> maps,
                    const SceneGeometry& geometry, std::span<const CameraView> views,
                    std::span<const DepthNormalMap> ground_truth, const EvalOptions& options) {
  EvalReport report;
  for (const DepthNormalMap& m : maps) {
    std::size_t count = 0;
    for (std::uint8_t f : m.validated.pixels()) count += f != 0;
    report.validated_fraction.push_back(
        m.validated.size() == 0 ? 0.0 : static_cast<double>(count) / m.validated.size());
  }
  if (!maps.empty() && !ground_truth.empty()) {
    report.depth_error = ComputeDepthErrorStats(maps, ground_truth, {}, true);
  }

  const std::vector<Eigen::Vector3d> samples = ObservedSurfaceSamples(geometry, views, options);
  report.ground_truth_samples = samples.size();
  if (cloud.points.empty()) {
    report.accuracy_defined = false;
    report.accuracy = std::numeric_limits<double>::quiet_NaN();
    report.completeness = std::numeric_limits<double>::infinity();
    report.overall = std::numeric_limits<double>::infinity();
    return report;
  }

  double accuracy_sum = 0.0;
  for (const FusedPoint& p : cloud.points) accuracy_sum += geometry.DistanceToSurface(p.position);
  report.accuracy_defined = true;
  report.accuracy = accuracy_sum / cloud.points.size();

  std::vector<BoostPoint> points;
  points.reserve(cloud.points.size());
  for (const FusedPoint& p : cloud.points) {
    points.emplace_back(p.position.x(), p.position.y(), p.position.z());
  }
  const bgi::rtree<BoostPoint, bgi::quadratic<16>> tree(points.begin(), points.end());
  double completeness_sum = 0.0;
  for (const Eigen::Vector3d& s : samples) {
    const BoostPoint query(s.x(), s.y(), s.z());
    BoostPoint nearest;
    tree.query(bgi::nearest(query, 1), &nearest);
    completeness_sum += bg::distance(query, nearest);
  }
  report.completeness = samples.empty() ? 0.0 : completeness_sum / samples.size();
  report.overall = 0.5 * (report.accuracy + report.completeness);
  return report;
}

}  // namespace ambc
