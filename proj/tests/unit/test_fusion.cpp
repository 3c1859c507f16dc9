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

#include <cmath>
#include <numbers>
#include <vector>

#include <gtest/gtest.h>

#include <Eigen/Geometry>

#include "ambc/errors.hpp"
#include "ambc/fusion.hpp"
#include "ambc/synthgen.hpp"
#include "test_support.hpp"

namespace ambc {
namespace {

const SyntheticScene& PlaneScene() {
  static const SyntheticScene scene = [] {
    RigOptions rig;
    rig.width = 64;
    rig.height = 48;
    SyntheticScene s = MakePlaneScene(rig, 9);
    for (DepthNormalMap& m : s.ground_truth) {
      for (std::uint8_t& v : m.validated.pixels()) v = 1;
    }
    return s;
  }();
  return scene;
}

// Reference plus `others` cameras sharing one pose; every map is validated
// at depth 2 unless overridden.
struct SharedPose {
  std::vector<CameraView> views;
  std::vector<DepthNormalMap> maps;
};

SharedPose MakeSharedPose(int others) {
  SharedPose s;
  for (int k = 0; k <= others; ++k) {
    CameraView v;
    v.name = std::to_string(k);
    v.intrinsics = testing::Intrinsics(10.0, 1.0, 1.0);
    v.image = Image<float>(3, 3, 0.5f);
    v.depth_min = 1.0;
    v.depth_max = 4.0;
    s.views.push_back(v);
    DepthNormalMap m(3, 3);
    for (float& d : m.depth.pixels()) d = 2.0f;
    for (std::uint8_t& f : m.validated.pixels()) f = 1;
    s.maps.push_back(std::move(m));
  }
  return s;
}

TEST(Fusion, ExactMapsFuseOntoTheSurface) {
  const SyntheticScene& s = PlaneScene();
  const FusionResult r = FuseWithOwners(s.views, s.ground_truth, FusionConfig{});
  ASSERT_GT(r.cloud.size(), 1000u);
  double worst = 0.0;
  for (const FusedPoint& p : r.cloud.points) {
    worst = std::max(worst, s.geometry.DistanceToSurface(p.position));
    EXPECT_NEAR(p.normal.norm(), 1.0, 1e-12);
    EXPECT_GE(p.support, 3);
  }
  EXPECT_LT(worst, 1e-6);
}

TEST(Fusion, EachPixelContributesAtMostOnce) {
  const SyntheticScene& s = PlaneScene();
  const FusionResult r = FuseWithOwners(s.views, s.ground_truth, FusionConfig{});
  std::vector<int> members(r.cloud.size(), 0);
  std::size_t validated = 0;
  for (std::size_t v = 0; v < s.views.size(); ++v) {
    for (std::int32_t owner : r.owner[v].pixels()) {
      if (owner >= 0) ++members[owner];
    }
    for (std::uint8_t f : s.ground_truth[v].validated.pixels()) validated += f;
  }
  for (std::size_t i = 0; i < r.cloud.size(); ++i) {
    EXPECT_EQ(members[i], r.cloud.points[i].support + 1) << "point " << i;
  }
  EXPECT_LE(r.cloud.size(), validated);
}

TEST(Fusion, CenterPointSeenByAllViews) {
  const SyntheticScene& s = PlaneScene();
  const FusionResult r = FuseWithOwners(s.views, s.ground_truth, FusionConfig{});
  const std::int32_t owner = r.owner[0](32, 24);
  ASSERT_GE(owner, 0);
  EXPECT_EQ(r.cloud.points[owner].support, 4);
}

TEST(Fusion, MinViewsBoundary) {
  FusionConfig config;
  config.min_views = 3;
  SharedPose all = MakeSharedPose(3);
  const FusionResult kept = FuseWithOwners(all.views, all.maps, config);
  EXPECT_EQ(kept.cloud.size(), 9u) << "3 of 3 consistent";
  for (const FusedPoint& p : kept.cloud.points) EXPECT_EQ(p.support, 3);

  SharedPose two = MakeSharedPose(3);
  for (float& d : two.maps[3].depth.pixels()) d = 3.0f;
  const FusionResult dropped = FuseWithOwners(two.views, two.maps, config);
  for (int y = 0; y < 3; ++y) {
    for (int x = 0; x < 3; ++x) EXPECT_EQ(dropped.owner[0](x, y), -1) << "2 of 3 consistent";
  }

  config.min_views = 2;
  EXPECT_GE(FuseWithOwners(two.views, two.maps, config).owner[0](1, 1), 0);
}

TEST(Fusion, RelativeDepthBoundary) {
  FusionConfig config;
  config.min_views = 1;
  SharedPose near = MakeSharedPose(1);
  for (float& d : near.maps[1].depth.pixels()) d = 1.99f;  // 0.5% off
  EXPECT_EQ(Fuse(near.views, near.maps, config).size(), 9u);

  SharedPose far = MakeSharedPose(1);
  for (float& d : far.maps[1].depth.pixels()) d = 1.97f;  // 1.5% off
  EXPECT_EQ(Fuse(far.views, far.maps, config).size(), 0u);

  config.absolute_depth = true;
  config.rel_depth = 0.05;
  EXPECT_EQ(Fuse(far.views, far.maps, config).size(), 9u);
  config.rel_depth = 0.02;
  EXPECT_EQ(Fuse(far.views, far.maps, config).size(), 0u);
}

TEST(Fusion, NormalBoundary) {
  FusionConfig config;
  config.min_views = 1;
  for (double angle : {20.0, 40.0}) {
    SharedPose s = MakeSharedPose(1);
    const Eigen::Vector3f n =
        Eigen::AngleAxisf(static_cast<float>(angle * std::numbers::pi / 180.0),
                          Eigen::Vector3f::UnitX()) *
        Eigen::Vector3f(0.0f, 0.0f, -1.0f);
    for (Eigen::Vector3f& v : s.maps[1].normal.pixels()) v = n;
    EXPECT_EQ(Fuse(s.views, s.maps, config).size(), angle < 30.0 ? 9u : 0u) << angle;
  }
}

TEST(Fusion, IdenticalEstimatesAverageToThemselves) {
  FusionConfig config;
  config.min_views = 1;
  const SharedPose s = MakeSharedPose(1);
  const FusedPointCloud cloud = Fuse(s.views, s.maps, config);
  ASSERT_EQ(cloud.size(), 9u);
  for (int i = 0; i < 9; ++i) {
    const Eigen::Vector3d expected = s.views[0].Backproject(i % 3, i / 3, 2.0);
    EXPECT_LT((cloud.points[i].position - expected).norm(), 1e-9);
    EXPECT_LT((cloud.points[i].normal - Eigen::Vector3d(0, 0, -1)).norm(), 1e-12);
  }
}

TEST(Fusion, UnvalidatedPixelsDoNotParticipate) {
  FusionConfig config;
  config.min_views = 1;
  SharedPose s = MakeSharedPose(1);
  for (std::uint8_t& f : s.maps[1].validated.pixels()) f = 0;
  EXPECT_EQ(Fuse(s.views, s.maps, config).size(), 0u);
}

TEST(Fusion, Deterministic) {
  const SyntheticScene& s = PlaneScene();
  const FusedPointCloud a = Fuse(s.views, s.ground_truth, FusionConfig{});
  const FusedPointCloud b = Fuse(s.views, s.ground_truth, FusionConfig{});
  ASSERT_EQ(a.size(), b.size());
  for (std::size_t i = 0; i < a.size(); ++i) {
    EXPECT_EQ(a.points[i].position, b.points[i].position);
    EXPECT_EQ(a.points[i].color, b.points[i].color);
  }
}

TEST(FusionConfig, Validation) {
  FusionConfig c;
  EXPECT_NO_THROW(c.Validate());
  c.min_views = 0;
  EXPECT_THROW(c.Validate(), ValidationError);
  c = FusionConfig{};
  c.rel_depth = 0.0;
  EXPECT_THROW(c.Validate(), ValidationError);
}

}  // namespace
}  // namespace ambc
