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

#include "ambc/ambc.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "ambc/errors.hpp"

namespace ambc {

std::vector<PixelOffset> DefaultOnlookerOffsets() {
  return {{0, -1}, {0, 1},  {-1, 0}, {1, 0},  {-1, -2}, {1, -2}, {-1, 2}, {1, 2},
          {-2, -1}, {2, -1}, {-2, 1}, {2, 1}, {0, -5},  {0, 5},  {-5, 0}, {5, 0}};
}

void AmbcConfig::Validate() const {
  if (food_number < 2) throw ValidationError("food_number must be at least 2");
  if (trial_limit < 0) throw ValidationError("trial_limit must be non-negative");
  if (!(smooth_reward >= 0.0) || !std::isfinite(smooth_reward)) {
    throw ValidationError("smooth_reward must be finite and non-negative");
  }
  if (iterations_per_cycle < 1) throw ValidationError("iterations_per_cycle must be positive");
  if (offsets.empty()) throw ValidationError("onlooker offsets must not be empty");
  for (const PixelOffset& o : offsets) {
    if (((o.dx + o.dy) & 1) == 0) {
      throw ValidationError("onlooker offset (" + std::to_string(o.dx) + ", " +
                            std::to_string(o.dy) + ") has even parity");
    }
  }
}

int BestIndex(std::span<const FoodSource> colony) {
  int best = 0;
  for (int i = 1; i < static_cast<int>(colony.size()); ++i) {
    const FoodSource& c = colony[i];
    const FoodSource& b = colony[best];
    if (c.fitness > b.fitness || (c.fitness == b.fitness && c.validated && !b.validated)) {
      best = i;
    }
  }
  return best;
}

bool SameSources(const ColonyGrid& a, const ColonyGrid& b) {
  if (a.width() != b.width() || a.height() != b.height() ||
      a.food_number() != b.food_number()) {
    return false;
  }
  const auto sa = a.sources();
  const auto sb = b.sources();
  for (std::size_t i = 0; i < sa.size(); ++i) {
    if (sa[i].hypothesis.normal != sb[i].hypothesis.normal ||
        sa[i].hypothesis.offset != sb[i].hypothesis.offset ||
        sa[i].fitness != sb[i].fitness || sa[i].trial != sb[i].trial ||
        sa[i].validated != sb[i].validated) {
      return false;
    }
  }
  return true;
}

PlaneHypothesis RandomHypothesis(const CameraView& ref, const Eigen::Vector3d& ray,
                                 RandomStream& rng) {
  Eigen::Vector3d normal;
  double facing = 0.0;
  do {
    normal = SampleHemisphereNormal(rng);
    facing = normal.dot(ray);
  } while (facing == 0.0);
  if (facing > 0.0) normal = -normal;
  const double depth = rng.Uniform(ref.depth_min, ref.depth_max);
  return PlaneFromDepth(normal, depth, ray);
}

std::optional<PlaneHypothesis> PerturbHypothesis(const PlaneHypothesis& source,
                                                 const PlaneHypothesis& partner, int parameter,
                                                 double step, const CameraView& ref,
                                                 const Eigen::Vector3d& ray) {
  PlaneHypothesis h = source;
  if (parameter < 3) {
    const double delta = partner.normal[parameter] - h.normal[parameter];
    if (delta != 0.0) {
      h.normal[parameter] += step * delta;
      const double norm = h.normal.norm();
      if (!(norm > 1e-12)) return std::nullopt;
      h.normal /= norm;
      const Eigen::Vector3d unit_ray = ray.normalized();
      const double along = h.normal.dot(unit_ray);
      if (along >= 0.0) h.normal -= 2.0 * along * unit_ray;
    }
  } else {
    h.offset += step * (partner.offset - h.offset);
  }
  const double denom = h.normal.dot(ray);
  if (!(std::abs(denom) > 1e-12) || denom > 0.0) return std::nullopt;
  const double depth = -h.offset / denom;
  if (!(depth >= ref.depth_min && depth <= ref.depth_max)) {
    const double clamped =
        std::isnan(depth) ? ref.depth_min : std::clamp(depth, ref.depth_min, ref.depth_max);
    h.offset = -clamped * denom;
  }
  return h;
}

std::optional<double> DepthInRange(const PlaneHypothesis& plane, const CameraView& ref,
                                   const Eigen::Vector3d& ray) {
  if (!(plane.normal.dot(ray) < 0.0)) return std::nullopt;
  const auto depth = TryDepthFromPlane(plane, ray);
  if (!depth || *depth < ref.depth_min || *depth > ref.depth_max) return std::nullopt;
  return depth;
}

namespace {

FoodSource FreshSource(const CameraView& ref, int x, int y, const FitnessEvaluator& evaluator,
                       RandomStream& rng) {
  FoodSource s;
  s.hypothesis = RandomHypothesis(ref, ref.Ray(x, y), rng);
  s.fitness = evaluator.Evaluate(x, y, s.hypothesis);
  return s;
}

}  // namespace

void InitColony(std::span<FoodSource> colony, const CameraView& ref, int x, int y,
                const FitnessEvaluator& evaluator, RandomStream& rng) {
  for (FoodSource& s : colony) s = FreshSource(ref, x, y, evaluator, rng);
}

void EmployedStep(std::span<FoodSource> colony, const CameraView& ref, int x, int y,
                  const FitnessEvaluator& evaluator, RandomStream& rng) {
  const int n = static_cast<int>(colony.size());
  const Eigen::Vector3d ray = ref.Ray(x, y);
  for (int i = 0; i < n; ++i) {
    int partner = rng.UniformInt(n - 1);
    if (partner >= i) ++partner;
    const int parameter = rng.UniformInt(4);
    const double step = rng.Uniform(-1.0, 1.0);
    FoodSource& s = colony[i];
    const auto candidate =
        PerturbHypothesis(s.hypothesis, colony[partner].hypothesis, parameter, step, ref, ray);
    if (!candidate) {
      ++s.trial;
      continue;
    }
    const double fitness = evaluator.Evaluate(x, y, *candidate);
    if (fitness > s.fitness) {
      s = FoodSource{*candidate, fitness, 0, false};
    } else {
      ++s.trial;
    }
  }
}

bool OnlookerStep(std::span<FoodSource> colony, const FoodSource& candidate,
                  const CameraView& ref, int x, int y, double smooth_reward,
                  const FitnessEvaluator& evaluator, RandomStream& rng) {
  const int slot = rng.UniformInt(static_cast<int>(colony.size()));
  FoodSource& target = colony[slot];
  if (!DepthInRange(candidate.hypothesis, ref, ref.Ray(x, y))) {
    ++target.trial;
    return false;
  }
  const double fitness = evaluator.Evaluate(x, y, candidate.hypothesis);
  const double score = fitness + (candidate.validated ? smooth_reward : 0.0);
  const bool is_best = slot == BestIndex(colony);
  if (score > target.fitness && !(is_best && fitness < target.fitness)) {
    target = FoodSource{candidate.hypothesis, fitness, 0, candidate.validated};
    return true;
  }
  ++target.trial;
  return false;
}

void ScoutStep(std::span<FoodSource> colony, const CameraView& ref, int x, int y,
               int trial_limit, const FitnessEvaluator& evaluator, RandomStream& rng) {
  const int best = BestIndex(colony);
  for (int i = 0; i < static_cast<int>(colony.size()); ++i) {
    if (i != best && colony[i].trial > trial_limit) {
      colony[i] = FreshSource(ref, x, y, evaluator, rng);
    }
  }
}

ColonyGrid InitColonies(const CameraView& ref, const AmbcConfig& config,
                        const FitnessEvaluator& evaluator, const StreamKey& key, int threads) {
  ColonyGrid grid(ref.image.width(), ref.image.height(), config.food_number);
  StreamKey k = key;
  k.phase = Phase::kInit;
#pragma omp parallel for num_threads(threads) schedule(static)
  for (int y = 0; y < grid.height(); ++y) {
    for (int x = 0; x < grid.width(); ++x) {
      RandomStream rng = k.ForPixel(x, y);
      InitColony(grid.colony(x, y), ref, x, y, evaluator, rng);
    }
  }
  return grid;
}

void EmployedPhase(ColonyGrid& grid, const CameraView& ref, const FitnessEvaluator& evaluator,
                   const StreamKey& key, int threads) {
  StreamKey k = key;
  k.phase = Phase::kEmployed;
#pragma omp parallel for num_threads(threads) schedule(static)
  for (int y = 0; y < grid.height(); ++y) {
    for (int x = 0; x < grid.width(); ++x) {
      RandomStream rng = k.ForPixel(x, y);
      EmployedStep(grid.colony(x, y), ref, x, y, evaluator, rng);
    }
  }
}

void OnlookerPhase(ColonyGrid& grid, CheckerColor color, const CameraView& ref,
                   const AmbcConfig& config, const FitnessEvaluator& evaluator,
                   const StreamKey& key, int threads) {
  StreamKey k = key;
  k.phase = color == CheckerColor::kRed ? Phase::kOnlookerRed : Phase::kOnlookerBlack;
  const int parity = color == CheckerColor::kRed ? 0 : 1;
  const int count = static_cast<int>(config.offsets.size());
  int same_color_reads = 0;
#pragma omp parallel for num_threads(threads) schedule(static) reduction(+ : same_color_reads)
  for (int y = 0; y < grid.height(); ++y) {
    for (int x = (y + parity) & 1; x < grid.width(); x += 2) {
      RandomStream rng = k.ForPixel(x, y);
      const PixelOffset o = config.offsets[rng.UniformInt(count)];
      const int qx = x + o.dx;
      const int qy = y + o.dy;
      if (!grid.Contains(qx, qy)) continue;
      if (ColorOf(qx, qy) == color) {
        ++same_color_reads;
        continue;
      }
      const FoodSource candidate = grid.Best(qx, qy);
      OnlookerStep(grid.colony(x, y), candidate, ref, x, y, config.smooth_reward, evaluator,
                   rng);
    }
  }
  if (same_color_reads > 0) throw ContractError("onlooker offset reads its own color");
}

void ScoutPhase(ColonyGrid& grid, const CameraView& ref, const AmbcConfig& config,
                const FitnessEvaluator& evaluator, const StreamKey& key, int threads) {
  StreamKey k = key;
  k.phase = Phase::kScout;
#pragma omp parallel for num_threads(threads) schedule(static)
  for (int y = 0; y < grid.height(); ++y) {
    for (int x = 0; x < grid.width(); ++x) {
      RandomStream rng = k.ForPixel(x, y);
      ScoutStep(grid.colony(x, y), ref, x, y, config.trial_limit, evaluator, rng);
    }
  }
}

void RunIteration(ColonyGrid& grid, const CameraView& ref, const AmbcConfig& config,
                  const FitnessEvaluator& evaluator, StreamKey key, int threads) {
  EmployedPhase(grid, ref, evaluator, key, threads);
  OnlookerPhase(grid, CheckerColor::kRed, ref, config, evaluator, key, threads);
  OnlookerPhase(grid, CheckerColor::kBlack, ref, config, evaluator, key, threads);
  ScoutPhase(grid, ref, config, evaluator, key, threads);
}

void ReevaluateColony(std::span<FoodSource> colony, int x, int y,
                      const FitnessEvaluator& evaluator) {
  for (FoodSource& s : colony) s.fitness = evaluator.Evaluate(x, y, s.hypothesis);
}

DepthNormalMap ExtractBestMap(const ColonyGrid& grid, const CameraView& ref) {
  DepthNormalMap map(grid.width(), grid.height());
  for (int y = 0; y < grid.height(); ++y) {
    for (int x = 0; x < grid.width(); ++x) {
      const FoodSource& best = grid.Best(x, y);
      const auto depth = TryDepthFromPlane(best.hypothesis, ref.Ray(x, y));
      map.depth(x, y) = depth ? static_cast<float>(*depth) : 0.0f;
      map.normal(x, y) = best.hypothesis.normal.cast<float>();
      map.fitness(x, y) = static_cast<float>(best.fitness);
      map.validated(x, y) = best.validated ? 1 : 0;
    }
  }
  return map;
}

}  // namespace ambc
