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

#include <optional>
#include <span>
#include <vector>

#include <Eigen/Core>

#include "ambc/camera.hpp"
#include "ambc/depth_map.hpp"
#include "ambc/geometry.hpp"
#include "ambc/matching.hpp"
#include "ambc/rng.hpp"

namespace ambc {

struct PixelOffset {
  int dx = 0;
  int dy = 0;
  bool operator==(const PixelOffset&) const = default;
};

// Odd-parity sample space around a pixel: unit steps, knight moves and
// 5-pixel jumps. Every entry lands on the opposite checkerboard color.
std::vector<PixelOffset> DefaultOnlookerOffsets();

struct AmbcConfig {
  int food_number = 10;
  int trial_limit = 10;
  double smooth_reward = 0.01;
  std::vector<PixelOffset> offsets = DefaultOnlookerOffsets();
  int iterations_per_cycle = 8;

  void Validate() const;
};

struct FoodSource {
  PlaneHypothesis hypothesis;
  double fitness = 0.0;  // raw, never reward-inflated
  int trial = 0;
  bool validated = false;
};

enum class CheckerColor { kRed, kBlack };

inline CheckerColor ColorOf(int x, int y) {
  return ((x + y) & 1) == 0 ? CheckerColor::kRed : CheckerColor::kBlack;
}

// Highest fitness; ties go to validated sources, then to the lowest slot.
int BestIndex(std::span<const FoodSource> colony);

// One colony of food_number sources per reference pixel.
class ColonyGrid {
 public:
  ColonyGrid() = default;
  ColonyGrid(int width, int height, int food_number)
      : width_(width), height_(height), food_number_(food_number),
        sources_(static_cast<std::size_t>(width) * height * food_number) {}

  int width() const { return width_; }
  int height() const { return height_; }
  int food_number() const { return food_number_; }
  bool Contains(int x, int y) const { return x >= 0 && y >= 0 && x < width_ && y < height_; }

  std::span<FoodSource> colony(int x, int y) {
    return {sources_.data() + Offset(x, y), static_cast<std::size_t>(food_number_)};
  }
  std::span<const FoodSource> colony(int x, int y) const {
    return {sources_.data() + Offset(x, y), static_cast<std::size_t>(food_number_)};
  }
  const FoodSource& Best(int x, int y) const { return colony(x, y)[BestIndex(colony(x, y))]; }
  double MaxFitness(int x, int y) const { return Best(x, y).fitness; }

  std::span<const FoodSource> sources() const { return sources_; }

 private:
  std::size_t Offset(int x, int y) const {
    return (static_cast<std::size_t>(y) * width_ + x) * food_number_;
  }

  int width_ = 0;
  int height_ = 0;
  int food_number_ = 0;
  std::vector<FoodSource> sources_;
};

bool SameSources(const ColonyGrid& a, const ColonyGrid& b);

// Random camera-facing plane whose depth at the ray is uniform in the view's
// depth range.
PlaneHypothesis RandomHypothesis(const CameraView& ref, const Eigen::Vector3d& ray,
                                 RandomStream& rng);

// Perturbs one parameter (0..2 normal components, 3 plane offset) towards or
// away from `partner` by `step` in [-1, 1]. The normal is renormalized and
// kept camera-facing; the depth at the ray is clamped into range.
std::optional<PlaneHypothesis> PerturbHypothesis(const PlaneHypothesis& source,
                                                 const PlaneHypothesis& partner, int parameter,
                                                 double step, const CameraView& ref,
                                                 const Eigen::Vector3d& ray);

// Depth of `plane` at the ray if the plane is camera-facing there and the
// depth lies inside the view's range.
std::optional<double> DepthInRange(const PlaneHypothesis& plane, const CameraView& ref,
                                   const Eigen::Vector3d& ray);

// Per-colony steps.
void InitColony(std::span<FoodSource> colony, const CameraView& ref, int x, int y,
                const FitnessEvaluator& evaluator, RandomStream& rng);
void EmployedStep(std::span<FoodSource> colony, const CameraView& ref, int x, int y,
                  const FitnessEvaluator& evaluator, RandomStream& rng);
// Returns true when the candidate replaced a slot.
bool OnlookerStep(std::span<FoodSource> colony, const FoodSource& candidate,
                  const CameraView& ref, int x, int y, double smooth_reward,
                  const FitnessEvaluator& evaluator, RandomStream& rng);
void ScoutStep(std::span<FoodSource> colony, const CameraView& ref, int x, int y,
               int trial_limit, const FitnessEvaluator& evaluator, RandomStream& rng);

// Whole-grid phases; parallel over pixels, deterministic for a given key.
ColonyGrid InitColonies(const CameraView& ref, const AmbcConfig& config,
                        const FitnessEvaluator& evaluator, const StreamKey& key, int threads);
void EmployedPhase(ColonyGrid& grid, const CameraView& ref, const FitnessEvaluator& evaluator,
                   const StreamKey& key, int threads);
// Updates colonies of `color` only, reading opposite-color neighbors.
void OnlookerPhase(ColonyGrid& grid, CheckerColor color, const CameraView& ref,
                   const AmbcConfig& config, const FitnessEvaluator& evaluator,
                   const StreamKey& key, int threads);
void ScoutPhase(ColonyGrid& grid, const CameraView& ref, const AmbcConfig& config,
                const FitnessEvaluator& evaluator, const StreamKey& key, int threads);

// One employed / onlooker red / onlooker black / scout round.
void RunIteration(ColonyGrid& grid, const CameraView& ref, const AmbcConfig& config,
                  const FitnessEvaluator& evaluator, StreamKey key, int threads);

// Recomputes stored fitness of every source at the given pixels' colonies.
void ReevaluateColony(std::span<FoodSource> colony, int x, int y,
                      const FitnessEvaluator& evaluator);

// Best hypothesis per pixel; validated copies each best source's flag.
DepthNormalMap ExtractBestMap(const ColonyGrid& grid, const CameraView& ref);

}  // namespace ambc
