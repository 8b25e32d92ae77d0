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

#include "hcap/errors.h"
#include "hcap/hull_json.h"

namespace hcap {
namespace {

using nlohmann::json;

void expect_same_shape(const Hull& a, const Hull& b) {
  for (Point z : {Point{0, 0.5}, Point{0.3, 1.2}, Point{-2, 0.1}, Point{4, 3}, Point{1, 1}}) {
    EXPECT_EQ(contains(a, z), contains(b, z));
    EXPECT_EQ(a.is_empty(), b.is_empty());
    if (!a.is_empty()) {
      EXPECT_NEAR(dist_to_hull(a, z), dist_to_hull(b, z), 1e-12);
    }
  }
}

TEST(HullJson, RoundTripsEveryKind) {
  const std::vector<Hull> hulls = {
      Hull::empty(),
      Hull::vertical_slit(0.5, 1.5),
      Hull::half_disk(-1, 0.7),
      Hull::ridge(RidgeProfile::lorentzian(0.3, 0, 1)),
      Hull::ridge(RidgeProfile::gaussian(0.5, 1, 0.5)),
      Hull::ridge(RidgeProfile::table({-1, 0, 1}, {0, 1, 0})),
      Hull::polyline({{-1, 0}, {-1, 1}, {1, 1}}),
      Hull::union_of({Hull::vertical_slit(-2, 1), Hull::half_disk(2, 0.5)}),
      Hull::shifted(Hull::vertical_slit(0, 1), 3),
      Hull::scaled(Hull::half_disk(0, 1), 2),
  };
  for (const Hull& h : hulls) {
    const json j = hull_to_json(h);
    const Hull back = hull_from_json(j);
    EXPECT_EQ(hull_to_json(back), j) << j.dump();
    expect_same_shape(h, back);
  }
}

TEST(HullJson, DocumentedSlitForm) {
  const Hull h = hull_from_json(json::parse(R"({"kind": "vertical_slit", "base": 0.0, "height": 1.0})"));
  EXPECT_TRUE(contains(h, {0, 0.5}));
  EXPECT_DOUBLE_EQ(sup_im(h), 1.0);
}

TEST(HullJson, RejectsUnknownKeysAndKinds) {
  EXPECT_THROW(hull_from_json(json::parse(R"({"kind": "vertical_slit", "base": 0, "height": 1, "color": 2})")),
               PreconditionError);
  EXPECT_THROW(hull_from_json(json::parse(R"({"kind": "teardrop"})")), PreconditionError);
  EXPECT_THROW(hull_from_json(json::parse(R"({"kind": "half_disk", "center": 0})")), PreconditionError);
  EXPECT_THROW(hull_from_json(json::parse(R"({"kind": "half_disk", "center": 0, "radius": "big"})")),
               PreconditionError);
}

TEST(SlitJson, RoundTrip) {
  const SlitDomain d(std::vector<Slit>{{1.0, 1.5, 3.5}, {2.0, -1, 0}});
  const SlitDomain back = slits_from_json(slits_to_json(d));
  ASSERT_EQ(back.size(), 2u);
  EXPECT_DOUBLE_EQ(back[0].x_lo, 1.5);
  EXPECT_DOUBLE_EQ(back[1].y, 2.0);
  EXPECT_THROW(slits_from_json(json::parse(R"([{"y": 1, "x_lo": 0, "x_hi": 1, "w": 3}])")), PreconditionError);
  EXPECT_THROW(slits_from_json(json::parse(R"([{"y": 1, "x_lo": 0, "x_hi": 2}, {"y": 1, "x_lo": 1, "x_hi": 3}])")),
               PreconditionError);
}

TEST(PointJson, BothForms) {
  EXPECT_EQ(point_from_json(json::parse("[1, 2]")), (Point{1, 2}));
  EXPECT_EQ(point_from_json(json::parse(R"({"re": -1, "im": 0.5})")), (Point{-1, 0.5}));
  EXPECT_THROW(point_from_json(json::parse("[1]")), PreconditionError);
}

}  // namespace
}  // namespace hcap
