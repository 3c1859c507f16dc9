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

#include "ambc/consistency.hpp"

#include <algorithm>
#include <cmath>

#include "ambc/errors.hpp"

namespace ambc {

void ConsistencyConfig::Validate() const {
  if (!(t_depth > 0.0)) throw ValidationError("t_depth must be positive");
  if (!(t_normal > 0.0 && t_normal < 90.0)) throw ValidationError("t_normal must be in (0, 90)");
  if (!(min_ratio > 0.0 && min_ratio <= 1.0)) {
    throw ValidationError("min_ratio must be in (0, 1]");
  }
}

bool CheckPair(int x, int y, const PlaneHypothesis& hypothesis, const CameraView& ref,
               const CameraView& src, const DepthNormalMap& src_map,
               const ConsistencyConfig& config) {
  const auto depth = TryDepthFromPlane(hypothesis, ref.Ray(x, y));
  if (!depth) return false;
  const Eigen::Vector3d point = ref.Backproject(x, y, *depth);
  const Eigen::Vector3d in_src = src.WorldToCamera(point);
  if (!(in_src.z() > 0.0)) return false;
  const Eigen::Vector2i p = RoundPixel(src.ProjectCamera(in_src));
  if (!src_map.depth.Contains(p.x(), p.y())) return false;
  if (!(std::abs(in_src.z() - src_map.depth(p.x(), p.y())) < config.t_depth)) return false;
  const Eigen::Vector3d normal = src.rotation * (ref.rotation.transpose() * hypothesis.normal);
  return AngleDegrees(normal, src_map.normal(p.x(), p.y()).cast<double>()) < config.t_normal;
}

ValidationResult ValidateMap(int ref_index, std::span<const CameraView> views,
                             std::span<const DepthNormalMap> maps,
                             const SourceViewSets& view_sets, const ConsistencyConfig& config,
                             int threads) {
  const CameraView& ref = views[ref_index];
  const DepthNormalMap& map = maps[ref_index];
  ValidationResult result{Image<std::uint8_t>(map.width(), map.height(), 0),
                          Image<ViewMask>(map.width(), map.height(), 0)};
#pragma omp parallel for num_threads(threads) schedule(static)
  for (int y = 0; y < map.height(); ++y) {
    for (int x = 0; x < map.width(); ++x) {
      const ViewMask set = view_sets.at(x, y);
      const int count = CountViews(set);
      if (count <= 1 || !(map.depth(x, y) > 0.0f)) continue;
      const Eigen::Vector3d ray = ref.Ray(x, y);
      const PlaneHypothesis hypothesis =
          PlaneFromDepth(map.normal(x, y).cast<double>(), map.depth(x, y), ray);
      ViewMask consistent = 0;
      for (ViewMask bits = set; bits != 0; bits &= bits - 1) {
        const int j = __builtin_ctzll(bits);
        if (CheckPair(x, y, hypothesis, ref, views[j], maps[j], config)) {
          consistent |= ViewMask{1} << j;
        }
      }
      result.consistent(x, y) = consistent;
      result.validated(x, y) = CountViews(consistent) >= config.min_ratio * count ? 1 : 0;
    }
  }
  return result;
}

std::vector<Injection> CollectInjections(int ref_index, std::span<const CameraView> views,
                                         std::span<const DepthNormalMap> maps,
                                         const ColonyGrid& ref_colonies,
                                         const SourceViewSets& ref_view_sets,
                                         const ValidationResult& ref_result,
                                         std::span<const FitnessEvaluator* const> evaluators,
                                         int threads) {
  const CameraView& ref = views[ref_index];
  std::vector<RelativePose> poses(views.size());
  for (std::size_t j = 0; j < views.size(); ++j) {
    poses[j] = RelativePoseBetween(ref, views[j]);
  }
  std::vector<std::vector<Injection>> rows(ref_colonies.height());
#pragma omp parallel for num_threads(threads) schedule(static)
  for (int y = 0; y < ref_colonies.height(); ++y) {
    for (int x = 0; x < ref_colonies.width(); ++x) {
      const ViewMask consistent = ref_result.consistent(x, y);
      if (consistent == 0) continue;
      const PlaneHypothesis& plane = ref_colonies.Best(x, y).hypothesis;
      const auto depth = TryDepthFromPlane(plane, ref.Ray(x, y));
      if (!depth) continue;
      const Eigen::Vector3d point = ref.Backproject(x, y, *depth);
      const ViewMask failed = ref_view_sets.at(x, y) & ~consistent;
      for (ViewMask bits = failed; bits != 0; bits &= bits - 1) {
        const int j = __builtin_ctzll(bits);
        const CameraView& target = views[j];
        const Eigen::Vector3d in_target = target.WorldToCamera(point);
        if (!(in_target.z() > 0.0)) continue;
        const Eigen::Vector2i p = RoundPixel(target.ProjectCamera(in_target));
        if (!maps[j].validated.Contains(p.x(), p.y()) || maps[j].validated(p.x(), p.y())) {
          continue;
        }
        const PlaneHypothesis moved = TransformPlane(plane, poses[j]);
        if (!DepthInRange(moved, target, target.Ray(p.x(), p.y()))) continue;
        const double fitness = evaluators[j]->Evaluate(p.x(), p.y(), moved);
        rows[y].push_back({j, p.x(), p.y(), moved, fitness});
      }
    }
  }
  std::vector<Injection> out;
  for (auto& row : rows) out.insert(out.end(), row.begin(), row.end());
  return out;
}

InjectionStats ApplyInjections(std::span<const Injection> injections,
                               std::span<ColonyGrid> colonies) {
  InjectionStats stats;
  for (const Injection& in : injections) {
    auto colony = colonies[in.target_view].colony(in.x, in.y);
    const double before = colony[BestIndex(colony)].fitness;
    auto weakest = std::min_element(colony.begin(), colony.end(),
                                    [](const FoodSource& a, const FoodSource& b) {
                                      return a.fitness < b.fitness;
                                    });
    if (in.fitness > weakest->fitness) {
      *weakest = FoodSource{in.hypothesis, in.fitness, 0, false};
      ++stats.applied;
    }
    if (colony[BestIndex(colony)].fitness < before) ++stats.max_fitness_decreases;
  }
  return stats;
}

}  // namespace ambc
