// Copyright 2026 The hcap Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.


#include <gtest/gtest.h>

#include <cmath>
#include <string>

#include "hcap/errors.h"
#include "hcap/geometry.h"

namespace hcap {
namespace {

TEST(Contains, CatalogPoints) {
  EXPECT_TRUE(contains(Hull::vertical_slit(0, 1), {0, 0.5}));
  EXPECT_FALSE(contains(Hull::half_disk(0, 1), {0, 2}));
  // f(0.5) = 1 / (1 + 0.25) = 0.8 >= 0.5.
  EXPECT_TRUE(contains(Hull::ridge(RidgeProfile::lorentzian(1, 0, 1)), {0.5, 0.5}));
  EXPECT_FALSE(contains(Hull::ridge(RidgeProfile::lorentzian(1, 0, 1)), {0.5, 0.81}));
}

TEST(Contains, ShiftAndScaleMoveTheShape) {
  const Hull s = Hull::shifted(Hull::vertical_slit(0, 1), 3.0);
  EXPECT_TRUE(contains(s, {3, 0.5}));
  EXPECT_FALSE(contains(s, {0, 0.5}));
  const Hull d = Hull::scaled(Hull::half_disk(0, 1), 2.0);
  EXPECT_TRUE(contains(d, {0, 1.9}));
  EXPECT_FALSE(contains(d, {0, 2.1}));
}

TEST(DistToHull, CatalogPoints) {
  EXPECT_NEAR(dist_to_hull(Hull::vertical_slit(0, 1), {1, 0.5}), 1.0, 1e-12);
  EXPECT_NEAR(dist_to_hull(Hull::half_disk(0, 1), {0, 3}), 2.0, 1e-12);
}

TEST(DistToHull, LorentzianMatchesDenseMinimization) {
  const RidgeProfile p = RidgeProfile::lorentzian(1, 0, 1);
  const Hull h = Hull::ridge(p);
  for (Point z : {Point{0, 2}, Point{1.5, 1.5}, Point{-3, 0.7}, Point{0.4, 3.0}}) {
    double best = INFINITY;
    for (int k = -400000; k <= 400000; ++k) {
      const double x = k * 2e-5;
      best = std::min(best, std::hypot(z.re - x, std::max(0.0, z.im - p(x))));
    }
    EXPECT_NEAR(dist_to_hull(h, z), best, 1e-6) << z.re << " " << z.im;
  }
  EXPECT_NEAR(dist_to_hull(h, {0, 2}), 1.0, 1e-9);
}

TEST(SupIm, CatalogShapes) {
  EXPECT_DOUBLE_EQ(sup_im(Hull::vertical_slit(0, 1)), 1.0);
  EXPECT_DOUBLE_EQ(sup_im(Hull::scaled(Hull::half_disk(0, 1), 2)), 2.0);
  EXPECT_DOUBLE_EQ(sup_im(Hull::ridge(RidgeProfile::lorentzian(0.5, 0, 1))), 0.5);
  EXPECT_DOUBLE_EQ(sup_im(Hull::empty()), 0.0);
}

TEST(ValidateHull, AttachedShapesPass) {
  EXPECT_TRUE(validate_hull(Hull::vertical_slit(0, 1), 0.01).pass);
  EXPECT_TRUE(validate_hull(Hull::half_disk(0, 1), 0.01).pass);
  const Hull pair = Hull::union_of({Hull::vertical_slit(-1, 1), Hull::vertical_slit(1, 1)});
  EXPECT_TRUE(validate_hull(pair, 0.01).pass);
}

TEST(ValidateHull, ClosedPocketFails) {
  const Hull cup = Hull::polyline({{-1, 0}, {-1, 1}, {1, 1}, {1, 0}});
  const HullDiagnostics d = validate_hull(cup, 0.01);
  EXPECT_FALSE(d.pass);
  ASSERT_TRUE(d.offending_cell.has_value());
  EXPECT_LT(std::abs(d.offending_cell->re), 1.0);
  EXPECT_LT(d.offending_cell->im, 1.0);
}

TEST(ValidateHull, FloatingPieceFails) {
  const Hull floating = Hull::union_of({Hull::vertical_slit(0, 1), Hull::polyline({{3, 1}, {4, 1}})});
  const HullDiagnostics d = validate_hull(floating, 0.02);
  EXPECT_FALSE(d.pass);
  EXPECT_NE(d.message.find("does not touch R"), std::string::npos);
}

TEST(ValidateHull, OverhangOpenToOneSidePasses) {
  const Hull hook = Hull::polyline({{-2, 0}, {-2, 2}, {2, 2}});
  EXPECT_TRUE(validate_hull(hook, 0.02).pass);
}

TEST(ValidateHull, RejectsBadResolution) {
  EXPECT_THROW(validate_hull(Hull::vertical_slit(0, 1), 0.0), PreconditionError);
}

TEST(HullContainedIn, NestedSlits) {
  EXPECT_TRUE(hull_contained_in(Hull::vertical_slit(0, 0.8), Hull::vertical_slit(0, 1), 200, 1));
  EXPECT_FALSE(hull_contained_in(Hull::vertical_slit(0, 1), Hull::vertical_slit(0, 0.8), 200, 1));
  EXPECT_TRUE(hull_contained_in(Hull::half_disk(0, 0.5), Hull::half_disk(0, 1), 200, 1));
}

TEST(SlitDomain, RejectsBadSlits) {
  EXPECT_THROW(SlitDomain(std::vector<Slit>{{0.0, 0, 1}}), PreconditionError);
  EXPECT_THROW(SlitDomain(std::vector<Slit>{{1.0, 1, 0}}), PreconditionError);
  EXPECT_THROW(SlitDomain(std::vector<Slit>{{1.0, 0, 2}, {1.0, 1, 3}}), PreconditionError);
  EXPECT_NO_THROW(SlitDomain(std::vector<Slit>{{1.0, 0, 2}, {1.5, 0, 2}}));
}

TEST(Slit, DistanceAndGap) {
  const Slit s{1.0, -1, 1};
  EXPECT_NEAR(s.distance({0, 3}), 2.0, 1e-12);
  EXPECT_NEAR(s.distance({4, 5}), 5.0, 1e-12);
  EXPECT_NEAR(slit_gap(s, {4.0, 5, 6}), 5.0, 1e-12);
  const double lower = slit_hull_distance(Slit{1.0, 1.5, 3.5}, Hull::vertical_slit(0, 1));
  EXPECT_LE(lower, 1.5);
  EXPECT_GE(lower, 1.5 - 1e-3);
}

TEST(Rect, ProjectAndInnerDistance) {
  const Rect r{0, 2, 0, 1};
  EXPECT_NEAR(r.inner_distance({0.5, 0.5}), 0.5, 1e-12);
  const Point p = r.project({1.0, 0.9});
  EXPECT_NEAR(p.re, 1.0, 1e-12);
  EXPECT_NEAR(p.im, 1.0, 1e-12);
}

}  // namespace
}  // namespace hcap
