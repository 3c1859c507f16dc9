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
#include <random>

#include <gtest/gtest.h>

#include "ambc/errors.hpp"
#include "ambc/geometry.hpp"
#include "ambc/rng.hpp"
#include "test_support.hpp"

namespace ambc {
namespace {

constexpr double kDeg = std::numbers::pi / 180.0;

using testing::BasicCamera;
using testing::DrawPlaneAndPose;
using testing::RandomDraw;

// Ray-plane intersection written from the point-normal form: a plane through
// p0 with normal n meets origin + s * dir at s = n.(p0 - origin) / n.dir.
double IntersectOracle(const Eigen::Vector3d& p0, const Eigen::Vector3d& n,
                       const Eigen::Vector3d& origin, const Eigen::Vector3d& dir) {
  return n.dot(p0 - origin) / n.dot(dir);
}

TEST(DepthFromPlane, FrontoParallelPlaneGivesItsDistance) {
  const CameraView cam = BasicCamera();
  const PlaneHypothesis plane{{0.0, 0.0, -1.0}, 2.0};
  for (int y : {0, 100, 479}) {
    for (int x : {0, 320, 639}) {
      EXPECT_NEAR(DepthFromPlane(plane, MakeRay(cam, x, y)), 2.0, 1e-12);
    }
  }
}

TEST(DepthFromPlane, SlantedPlaneMatchesIntersectionOracle) {
  const CameraView cam = BasicCamera();
  const Eigen::Vector3d n(std::sin(20.0 * kDeg), 0.0, -std::cos(20.0 * kDeg));
  const Eigen::Vector3d p0(0.0, 0.0, 2.0);
  const PlaneHypothesis plane{n, -n.dot(p0)};
  for (auto [x, y] : {std::pair{320, 240}, {10, 20}, {600, 400}, {320, 0}}) {
    const PixelRay ray = MakeRay(cam, x, y);
    const double expected = IntersectOracle(p0, n, Eigen::Vector3d::Zero(), ray.direction);
    EXPECT_NEAR(DepthFromPlane(plane, ray), expected, 1e-12) << x << "," << y;
  }
  EXPECT_NEAR(DepthFromPlane(plane, MakeRay(cam, 320, 240)), 2.0, 1e-12);
}

TEST(DepthFromPlane, PlaneContainingRayIsDegenerate) {
  const CameraView cam = BasicCamera();
  const Eigen::Vector3d ray = cam.Ray(100, 50);
  const Eigen::Vector3d n = ray.cross(Eigen::Vector3d::UnitY()).normalized();
  try {
    DepthFromPlane({n, 0.0}, MakeRay(cam, 100, 50));
    FAIL() << "expected a degenerate-plane error";
  } catch (const GeometryError& e) {
    EXPECT_EQ(e.kind(), GeometryError::Kind::kDegeneratePlane);
  }
}

TEST(DepthFromPlane, RayHasUnitZ) {
  const CameraView cam = BasicCamera();
  for (int y = 0; y < 480; y += 37) {
    for (int x = 0; x < 640; x += 41) EXPECT_EQ(MakeRay(cam, x, y).direction.z(), 1.0);
  }
}

TEST(DepthFromPlane, InvariantToJointScaling) {
  const CameraView cam = BasicCamera();
  const Eigen::Vector3d n = Eigen::Vector3d(0.2, -0.3, -1.0).normalized();
  const PlaneHypothesis plane{n, 2.5};
  const PixelRay ray = MakeRay(cam, 123, 321);
  const double d = DepthFromPlane(plane, ray);
  for (double k : {0.001, 0.5, 3.0, 1e4}) {
    EXPECT_NEAR(DepthFromPlane({k * n, k * 2.5}, ray), d, 1e-12 * d);
  }
}

TEST(DepthFromPlane, RoundTripResidualAndReprojection) {
  std::mt19937_64 rng(7);
  std::uniform_int_distribution<int> px(0, 639), py(0, 479);
  int draws = 0;
  for (int i = 0; i < 2000; ++i) {
    RandomDraw d = DrawPlaneAndPose(rng);
    const int x = px(rng), y = py(rng);
    const auto depth = TryDepthFromPlane(d.plane, d.ref.Ray(x, y));
    if (!depth) continue;
    ++draws;
    const Eigen::Vector3d cam_point = *depth * d.ref.Ray(x, y);
    EXPECT_LT(std::abs(d.plane.normal.dot(cam_point) + d.plane.offset),
              1e-9 * std::abs(d.plane.offset));
    const Eigen::Vector3d world = d.ref.Backproject(x, y, *depth);
    const Eigen::Vector2d back = d.ref.ProjectCamera(d.ref.WorldToCamera(world));
    EXPECT_LT((back - Eigen::Vector2d(x, y)).norm(), 1e-9);
  }
  EXPECT_GE(draws, 1000);
}

TEST(PlaneHomography, SameCameraIsIdentity) {
  CameraView cam = BasicCamera();
  std::mt19937_64 rng(3);
  cam.rotation = testing::RandomRotation(rng, 2.0);
  cam.translation = Eigen::Vector3d(0.3, -1.0, 2.0);
  const PlaneHypothesis plane{Eigen::Vector3d(0.1, 0.2, -1.0).normalized(), 3.0};
  const Eigen::Matrix3d h = PlaneHomography(plane, cam, cam);
  EXPECT_LT((h - Eigen::Matrix3d::Identity()).cwiseAbs().maxCoeff(), 1e-12);
}

TEST(PlaneHomography, ZeroOffsetIsDegenerate) {
  const CameraView cam = BasicCamera();
  EXPECT_THROW(PlaneHomography({{0.0, 0.0, -1.0}, 0.0}, cam, cam), GeometryError);
  EXPECT_THROW(PlaneHomography({{0.0, 0.0, -1.0}, 1e-13}, cam, cam), GeometryError);
}

TEST(PlaneHomography, PureTranslationMatchesPointTransfer) {
  const CameraView ref = BasicCamera();
  CameraView src = BasicCamera();
  src.translation = Eigen::Vector3d(-0.4, 0.0, 0.0);
  const PlaneHypothesis plane{{0.0, 0.0, -1.0}, 3.0};
  const Eigen::Matrix3d h = PlaneHomography(plane, ref, src);
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> px(0.0, 639.0), py(0.0, 479.0);
  for (int i = 0; i < 100; ++i) {
    const double x = px(rng), y = py(rng);
    const Eigen::Vector3d world = ref.CameraToWorld(3.0 * ref.Ray(x, y));
    const Eigen::Vector2d oracle = src.ProjectCamera(src.WorldToCamera(world));
    EXPECT_LT((ApplyHomography(h, x, y) - oracle).norm(), 1e-9);
  }
}

TEST(PlaneHomography, MatchesBackprojectReprojectOverRandomDraws) {
  std::mt19937_64 rng(2024);
  std::uniform_real_distribution<double> px(0.0, 639.0), py(0.0, 479.0);
  int compared = 0;
  double worst = 0.0;
  for (int i = 0; i < 3000 && compared < 1500; ++i) {
    const RandomDraw d = DrawPlaneAndPose(rng);
    const double x = px(rng), y = py(rng);
    const auto depth = TryDepthFromPlane(d.plane, d.ref.Ray(x, y));
    if (!depth || *depth > 50.0) continue;
    const Eigen::Vector3d in_src = d.src.WorldToCamera(d.ref.Backproject(x, y, *depth));
    if (in_src.z() < 0.1) continue;
    const Eigen::Vector2d oracle = d.src.ProjectCamera(in_src);
    if (oracle.cwiseAbs().maxCoeff() > 5000.0) continue;
    const Eigen::Vector2d transfer = ApplyHomography(PlaneHomography(d.plane, d.ref, d.src), x, y);
    worst = std::max(worst, (transfer - oracle).norm());
    ++compared;
  }
  EXPECT_GE(compared, 1000);
  EXPECT_LT(worst, 1e-6);
}

TEST(HemisphereSampling, UnitAndCameraFacing) {
  RandomStream rng(5);
  for (int i = 0; i < 10000; ++i) {
    const Eigen::Vector3d n = SampleHemisphereNormal(rng);
    EXPECT_NEAR(n.norm(), 1.0, 1e-9);
    EXPECT_LT(n.z(), 0.0);
  }
}

TEST(HemisphereSampling, MeanAndOctantOccupancy) {
  RandomStream rng(99);
  const int draws = 100000;
  Eigen::Vector3d sum = Eigen::Vector3d::Zero();
  int octant[4] = {0, 0, 0, 0};
  for (int i = 0; i < draws; ++i) {
    const Eigen::Vector3d n = SampleHemisphereNormal(rng);
    sum += n;
    ++octant[(n.x() >= 0.0 ? 1 : 0) + (n.y() >= 0.0 ? 2 : 0)];
  }
  const Eigen::Vector3d mean = sum / draws;
  EXPECT_NEAR(mean.x(), 0.0, 0.01);
  EXPECT_NEAR(mean.y(), 0.0, 0.01);
  EXPECT_NEAR(mean.z(), -0.5, 0.01);
  for (int count : octant) EXPECT_NEAR(static_cast<double>(count) / draws, 0.25, 0.01);
}

TEST(TransformHypothesis, IdentityTransform) {
  const CameraView cam = BasicCamera();
  const PlaneHypothesis plane{Eigen::Vector3d(0.3, 0.1, -1.0).normalized(), 2.0};
  const TransformedHypothesis t = TransformHypothesis(plane, 200, 150, cam, cam);
  EXPECT_NEAR(t.pixel.x(), 200.0, 1e-9);
  EXPECT_NEAR(t.pixel.y(), 150.0, 1e-9);
  EXPECT_NEAR(t.depth, DepthFromPlane(plane, MakeRay(cam, 200, 150)), 1e-12);
  EXPECT_LT((t.normal - plane.normal).norm(), 1e-15);
  EXPECT_TRUE(t.in_bounds);
}

TEST(TransformHypothesis, MatchesWorldFrameComputation) {
  std::mt19937_64 rng(17);
  std::uniform_int_distribution<int> px(0, 639), py(0, 479);
  int compared = 0;
  for (int i = 0; i < 500; ++i) {
    const RandomDraw d = DrawPlaneAndPose(rng);
    const int x = px(rng), y = py(rng);
    const auto depth = TryDepthFromPlane(d.plane, d.ref.Ray(x, y));
    if (!depth) continue;
    const Eigen::Vector3d world = d.ref.Backproject(x, y, *depth);
    const Eigen::Vector3d in_src = d.src.WorldToCamera(world);
    if (in_src.z() <= 0.0) {
      EXPECT_THROW(TransformHypothesis(d.plane, x, y, d.ref, d.src), GeometryError);
      continue;
    }
    const TransformedHypothesis t = TransformHypothesis(d.plane, x, y, d.ref, d.src);
    const Eigen::Vector3d world_normal = d.ref.rotation.transpose() * d.plane.normal;
    EXPECT_NEAR(t.depth, in_src.z(), 1e-9 * in_src.z());
    EXPECT_LT((t.pixel - d.src.ProjectCamera(in_src)).norm(), 1e-6);
    EXPECT_LT((t.normal - d.src.rotation * world_normal).norm(), 1e-12);
    EXPECT_NEAR(t.normal.norm(), 1.0, 1e-12);
    ++compared;
  }
  EXPECT_GE(compared, 100);
}

TEST(TransformHypothesis, BehindTargetCameraThrows) {
  const CameraView ref = BasicCamera();
  CameraView behind = BasicCamera();
  // Camera 5 units forward of ref, looking back along -z.
  behind.rotation = Eigen::AngleAxisd(std::numbers::pi, Eigen::Vector3d::UnitY()).toRotationMatrix();
  behind.translation = -behind.rotation * Eigen::Vector3d(0.0, 0.0, 5.0);
  CameraView ahead = BasicCamera();
  ahead.translation = Eigen::Vector3d(0.0, 0.0, -5.0);
  const PlaneHypothesis plane{{0.0, 0.0, -1.0}, 2.0};
  EXPECT_NO_THROW(TransformHypothesis(plane, 320, 240, ref, behind));
  try {
    TransformHypothesis(plane, 320, 240, ref, ahead);
    FAIL() << "expected a behind-camera error";
  } catch (const GeometryError& e) {
    EXPECT_EQ(e.kind(), GeometryError::Kind::kBehindCamera);
  }
}

TEST(TransformHypothesis, OutOfImageIsMarkedNotThrown) {
  const CameraView ref = BasicCamera();
  CameraView src = BasicCamera();
  src.translation = Eigen::Vector3d(-50.0, 0.0, 0.0);
  const TransformedHypothesis t =
      TransformHypothesis({{0.0, 0.0, -1.0}, 2.0}, 320, 240, ref, src);
  EXPECT_FALSE(t.in_bounds);
}

TEST(TransformPlane, AgreesWithPointwiseTransfer) {
  std::mt19937_64 rng(23);
  for (int i = 0; i < 200; ++i) {
    const RandomDraw d = DrawPlaneAndPose(rng);
    const RelativePose pose = RelativePoseBetween(d.ref, d.src);
    const PlaneHypothesis moved = TransformPlane(d.plane, pose);
    const auto depth = TryDepthFromPlane(d.plane, d.ref.Ray(100, 100));
    if (!depth) continue;
    const Eigen::Vector3d p = pose.rotation * (*depth * d.ref.Ray(100, 100)) + pose.translation;
    EXPECT_NEAR(moved.normal.dot(p) + moved.offset, 0.0, 1e-9 * (1.0 + std::abs(moved.offset)));
  }
}

}  // namespace
}  // namespace ambc
