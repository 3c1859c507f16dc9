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

#include <array>
#include <cmath>
#include <limits>
#include <random>
#include <vector>

#include <gtest/gtest.h>

#include "ambc/errors.hpp"
#include "ambc/matching.hpp"
#include "ambc/view_selection.hpp"
#include "test_support.hpp"

namespace ambc {
namespace {

MatchingConfig FullWindow() {
  MatchingConfig c;
  c.window = 11;
  c.window_step = 1;
  return c;
}

CameraView ViewWithImage(Image<float> image) {
  CameraView v;
  v.intrinsics = testing::Intrinsics(100.0, 0.5 * (image.width() - 1), 0.5 * (image.height() - 1));
  v.image = std::move(image);
  v.depth_min = 1.0;
  v.depth_max = 3.0;
  return v;
}

using testing::BilinearOracle;
using testing::BruteForceCost;

Image<float> DyadicImage(int width, int height, std::mt19937_64& rng) {
  std::uniform_int_distribution<int> level(0, 255);
  Image<float> image(width, height);
  for (float& p : image.pixels()) p = static_cast<float>(level(rng)) / 256.0f;
  return image;
}

TEST(PairwiseCost, SelfMatchIsZero) {
  std::mt19937_64 rng(1);
  const CameraView v = ViewWithImage(testing::RandomImage(32, 32, rng));
  EXPECT_NEAR(PairwiseCost(v, v, 16, 16, Eigen::Matrix3d::Identity(), FullWindow()), 0.0,
              1e-12);
}

TEST(PairwiseCost, ContrastInversionIsTwo) {
  std::mt19937_64 rng(2);
  const CameraView ref = ViewWithImage(testing::RandomImage(32, 32, rng));
  Image<float> inverted = ref.image;
  for (float& p : inverted.pixels()) p = 1.0f - p;
  const CameraView src = ViewWithImage(inverted);
  EXPECT_NEAR(PairwiseCost(ref, src, 16, 16, Eigen::Matrix3d::Identity(), FullWindow()), 2.0,
              1e-9);
}

TEST(PairwiseCost, FlatPatchesGetMaxCost) {
  std::mt19937_64 rng(3);
  const CameraView textured = ViewWithImage(testing::RandomImage(32, 32, rng));
  const CameraView flat = ViewWithImage(Image<float>(32, 32, 0.4f));
  const MatchingConfig c = FullWindow();
  EXPECT_EQ(PairwiseCost(flat, textured, 16, 16, Eigen::Matrix3d::Identity(), c), c.max_cost);
  EXPECT_EQ(PairwiseCost(textured, flat, 16, 16, Eigen::Matrix3d::Identity(), c), c.max_cost);
}

TEST(PairwiseCost, WarpLeavingSourceGetsMaxCost) {
  std::mt19937_64 rng(4);
  const CameraView v = ViewWithImage(testing::RandomImage(32, 32, rng));
  Eigen::Matrix3d shift = Eigen::Matrix3d::Identity();
  shift(0, 2) = 20.0;
  EXPECT_EQ(PairwiseCost(v, v, 16, 16, shift, FullWindow()), 2.0);
}

TEST(PairwiseCost, MatchesBruteForceOracle) {
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> jitter(-1.5, 1.5);
  std::uniform_real_distribution<double> tilt(-0.05, 0.05);
  const MatchingConfig c = FullWindow();
  double worst = 0.0;
  for (int trial = 0; trial < 150; ++trial) {
    const Image<float> ref = testing::RandomImage(40, 40, rng);
    const Image<float> src = testing::RandomImage(40, 40, rng);
    Eigen::Matrix3d h = Eigen::Matrix3d::Identity();
    if (trial % 2 == 1) {
      h(0, 0) += tilt(rng);
      h(0, 1) += tilt(rng);
      h(1, 0) += tilt(rng);
      h(1, 1) += tilt(rng);
      h(0, 2) = jitter(rng);
      h(1, 2) = jitter(rng);
    }
    const double got = PairwiseCost(ViewWithImage(ref), ViewWithImage(src), 20, 20, h, c);
    const double want = BruteForceCost(ref, src, 20, 20, h, c);
    worst = std::max(worst, std::abs(got - want));
  }
  EXPECT_LT(worst, 1e-10);
}

TEST(PairwiseCost, InvariantToAffineIntensityOfSource) {
  std::mt19937_64 rng(6);
  const std::array<std::pair<double, double>, 4> changes = {
      {{0.5, 0.25}, {3.0, -0.125}, {1.5, 0.5}, {2.0, 0.0}}};
  Eigen::Matrix3d h = Eigen::Matrix3d::Identity();
  h(0, 2) = 0.375;
  h(1, 2) = -0.25;
  double worst = 0.0;
  for (int trial = 0; trial < 100; ++trial) {
    const CameraView ref = ViewWithImage(DyadicImage(32, 32, rng));
    const CameraView src = ViewWithImage(DyadicImage(32, 32, rng));
    const double base = PairwiseCost(ref, src, 16, 16, h, FullWindow());
    for (auto [a, b] : changes) {
      Image<float> changed = src.image;
      for (float& p : changed.pixels()) p = static_cast<float>(a * p + b);
      const double cost = PairwiseCost(ref, ViewWithImage(changed), 16, 16, h, FullWindow());
      worst = std::max(worst, std::abs(cost - base));
    }
  }
  EXPECT_LT(worst, 1e-8);
}

TEST(PairwiseCost, SymmetricWhenColorWeightIsNeutral) {
  std::mt19937_64 rng(7);
  MatchingConfig c = FullWindow();
  c.sigma_color = 1e6;
  for (int trial = 0; trial < 50; ++trial) {
    const CameraView a = ViewWithImage(testing::RandomImage(24, 24, rng));
    const CameraView b = ViewWithImage(testing::RandomImage(24, 24, rng));
    const Eigen::Matrix3d id = Eigen::Matrix3d::Identity();
    EXPECT_NEAR(PairwiseCost(a, b, 12, 12, id, c), PairwiseCost(b, a, 12, 12, id, c), 1e-12);
  }
}

TEST(PairwiseCost, BorderWindowDropsOutsideSamples) {
  std::mt19937_64 rng(8);
  const CameraView v = ViewWithImage(testing::RandomImage(32, 32, rng));
  const ReferencePatch corner(v.image, 0, 0, FullWindow());
  EXPECT_EQ(corner.size(), 36u);
  EXPECT_NEAR(corner.Cost(v.image, Eigen::Matrix3d::Identity(), 2.0), 0.0, 1e-12);
}

TEST(AggregateCost, Arithmetic) {
  const std::vector<double> three = {0.2, 0.4, 0.6};
  EXPECT_NEAR(AggregateCost(three), 0.6, 1e-15);
  const std::vector<double> one = {0.1};
  EXPECT_TRUE(std::isinf(AggregateCost(one)));
  EXPECT_TRUE(std::isinf(AggregateCost({})));
}

TEST(AggregateCost, IdenticalCostsScaleByUnbiasedDenominator) {
  for (int k = 2; k <= 10; ++k) {
    const std::vector<double> costs(k, 0.3);
    EXPECT_NEAR(AggregateCost(costs), 0.3 * k / (k - 1), 1e-14);
  }
}

TEST(Fitness, KnownValues) {
  EXPECT_EQ(Fitness(0.0), 1.0);
  EXPECT_EQ(Fitness(1.0), 0.5);
  EXPECT_EQ(Fitness(std::numeric_limits<double>::infinity()), 0.0);
  EXPECT_THROW(Fitness(-0.1), ContractError);
}

TEST(Fitness, StrictlyDecreasingAndBounded) {
  double previous = Fitness(0.0);
  for (double cost = 0.01; cost < 100.0; cost *= 1.3) {
    const double f = Fitness(cost);
    EXPECT_LT(f, previous);
    EXPECT_GE(f, 0.0);
    EXPECT_LE(f, 1.0);
    previous = f;
  }
}

TEST(MatchingConfig, Validation) {
  MatchingConfig c;
  EXPECT_NO_THROW(c.Validate());
  c.window = 10;
  EXPECT_THROW(c.Validate(), ValidationError);
  c = MatchingConfig{};
  c.window = 1;
  EXPECT_THROW(c.Validate(), ValidationError);
  c = MatchingConfig{};
  c.sigma_color = 0.0;
  EXPECT_THROW(c.Validate(), ValidationError);
  c = MatchingConfig{};
  c.max_cost = 1.0;
  EXPECT_THROW(c.Validate(), ValidationError);
}

// Two views of a textured fronto-parallel plane at depth 2.
struct StereoPair {
  std::vector<CameraView> views;
  SourceViewSets sets;
};

StereoPair MakeStereoPair(int sources) {
  std::mt19937_64 rng(9);
  StereoPair p;
  const int w = 48, h = 32;
  const Image<float> texture = testing::RandomImage(400, 400, rng);
  for (int k = 0; k <= sources; ++k) {
    CameraView v;
    v.name = std::to_string(k);
    v.intrinsics = testing::Intrinsics(60.0, 0.5 * (w - 1), 0.5 * (h - 1));
    v.translation = Eigen::Vector3d(-0.2 * k, 0.0, 0.0);
    v.depth_min = 1.0;
    v.depth_max = 3.0;
    v.image = Image<float>(w, h);
    for (int y = 0; y < h; ++y) {
      for (int x = 0; x < w; ++x) {
        const Eigen::Vector3d world = v.Backproject(x, y, 2.0);
        v.image(x, y) = static_cast<float>(
            BilinearOracle(texture, 200.0 + 60.0 * world.x(), 200.0 + 60.0 * world.y()));
      }
    }
    p.views.push_back(std::move(v));
  }
  ViewMask all = 0;
  for (int k = 1; k <= sources; ++k) all |= ViewMask{1} << k;
  p.sets = SourceViewSets(w, h, all);
  return p;
}

TEST(PhotometricEvaluator, TruePlaneBeatsWrongPlanes) {
  const StereoPair p = MakeStereoPair(2);
  const PhotometricEvaluator eval(0, p.views, p.sets, MatchingConfig{});
  const PlaneHypothesis truth{{0.0, 0.0, -1.0}, 2.0};
  const double best = eval.Evaluate(24, 16, truth);
  EXPECT_GT(best, 0.9);
  for (double d : {1.5, 1.8, 2.3, 2.8}) {
    EXPECT_LT(eval.Evaluate(24, 16, {{0.0, 0.0, -1.0}, d}), best);
  }
}

TEST(PhotometricEvaluator, SingleSourceGivesZeroFitness) {
  const StereoPair p = MakeStereoPair(1);
  const PhotometricEvaluator eval(0, p.views, p.sets, MatchingConfig{});
  EXPECT_EQ(eval.Evaluate(24, 16, {{0.0, 0.0, -1.0}, 2.0}), 0.0);
}

TEST(PhotometricEvaluator, CostEqualsAggregateOfPairwiseCosts) {
  const StereoPair p = MakeStereoPair(3);
  const MatchingConfig c = FullWindow();
  const PhotometricEvaluator eval(0, p.views, p.sets, c);
  const PlaneHypothesis plane{Eigen::Vector3d(0.05, -0.02, -1.0).normalized(), 2.1};
  std::vector<double> costs;
  for (int j = 1; j <= 3; ++j) {
    costs.push_back(
        PairwiseCost(p.views[0], p.views[j], 20, 15, PlaneHomography(plane, p.views[0], p.views[j]), c));
  }
  EXPECT_NEAR(eval.EvaluateCost(20, 15, plane), AggregateCost(costs), 1e-12);
}

}  // namespace
}  // namespace ambc
