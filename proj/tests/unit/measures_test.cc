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
#include <numbers>

#include "hcap/errors.h"
#include "hcap/measures.h"

namespace hcap {
namespace {

WalkConfig seeded(std::uint64_t seed) {
  WalkConfig cfg;
  cfg.seed = seed;
  return cfg;
}

EmpiricalMeasure point_mass(Point p) {
  EmpiricalMeasure m;
  m.atoms.push_back({p, 1.0, ExitTag::kRealLine, -1});
  m.total_weight = 1.0;
  m.walks = 1;
  return m;
}

TEST(HatFunction, NormIsExactlyOne) {
  for (double s : {0.25, 1.0, 4.0}) {
    const HatFunction f{{0, 0}, s};
    EXPECT_DOUBLE_EQ(f.sup_norm() + f.lipschitz(), 1.0);
    EXPECT_DOUBLE_EQ(f({0, 0}), s / (s + 1));
    EXPECT_DOUBLE_EQ(f({s, 0}), 0.0);
    EXPECT_NEAR(f({0.5 * s, 0}), 0.5 * s / (s + 1), 1e-15);
  }
}

TEST(TestDictionary, GridLayoutAndValidation) {
  const TestDictionary d = TestDictionary::grid(-1, 1, 0, 2, 3, 2, {0.5, 2});
  EXPECT_EQ(d.size(), 12u);
  EXPECT_EQ(d.member(0).center, (Point{-1, 0}));
  EXPECT_EQ(d.member(1).scale, 2.0);
  EXPECT_THROW(TestDictionary({{0, 0}}, {0.0}), PreconditionError);
  EXPECT_THROW(TestDictionary({}, {1.0}), PreconditionError);
  const TestDictionary h = TestDictionary::for_hull(Hull::vertical_slit(0, 2), 5);
  EXPECT_EQ(h.size(), 21u * 11u * 3u);
  EXPECT_EQ(h.centers().front(), (Point{-5, 0}));
  EXPECT_EQ(h.centers().back(), (Point{5, 2}));
}

TEST(BlSurrogate, IdenticalSamplesGiveZero) {
  const EmpiricalMeasure m = sample_harmonic_measure({0, 1}, Hull::vertical_slit(0, 0.5), {}, 2000, seeded(1));
  const SurrogateResult r = bl_distance_surrogate(m, m, TestDictionary::grid(-3, 3, 0, 1));
  EXPECT_EQ(r.value, 0.0);
}

TEST(BlSurrogate, PointMassesSeparatedByHat) {
  for (double s : {0.25, 1.0, 4.0}) {
    for (double t : {0.1, 0.2}) {
      const TestDictionary d({{0, 0}}, {s});
      const SurrogateResult r = bl_distance_surrogate(point_mass({0, 0}), point_mass({t, 0}), d);
      // f(0) - f(t) = s/(s+1) * t/s.
      EXPECT_GE(r.value, t / (s + 1) - 1e-15);
    }
  }
}

TEST(BlSurrogate, BoundedByTwoAndRadiusFormula) {
  const TestDictionary d = TestDictionary::grid(-2, 2, 0, 2);
  const SurrogateResult r = bl_distance_surrogate(point_mass({0, 0}), point_mass({50, 0}), d, 0.05);
  EXPECT_LE(r.value, 2.0);
  const double expected = 2 * std::sqrt(std::log(4.0 * static_cast<double>(d.size()) / 0.05) / 2.0);
  EXPECT_NEAR(r.confidence_radius, expected, 1e-12);
  EXPECT_THROW(bl_distance_surrogate(point_mass({0, 0}), EmpiricalMeasure{}, d), PreconditionError);
}

TEST(RegularityProbe, CloseToRealLine) {
  const Estimate e = regularity_probe(Hull::empty(), {}, {0, 0.01}, 0.1, 100000, seeded(2));
  // Exit abscissa is 0.01 * Cauchy; within 0.1 of z iff |C| < sqrt(99).
  const double expected = 2 / std::numbers::pi * std::atan(std::sqrt(99.0));
  EXPECT_NEAR(expected, 0.936, 5e-4);
  EXPECT_LE(std::abs(e.mean - expected), 3 * e.std_error);
}

TEST(RegularityProbe, FarFromBoundaryIsZero) {
  const Estimate e = regularity_probe(Hull::empty(), {}, {0, 1}, 0.1, 5000, seeded(3));
  EXPECT_EQ(e.mean, 0.0);
  EXPECT_THROW(regularity_probe(Hull::vertical_slit(0, 1), {}, {0, 0.5}, 0.1, 10, seeded(3)), PreconditionError);
}

TEST(RegularityProbe, NearSlitAboveBeurlingBound) {
  const Slit c{1.0, -1, 1};
  const Point z{0, 1.001};
  const double eps = 0.1;
  const Estimate e = regularity_probe(Hull::empty(), SlitDomain(std::vector<Slit>{c}), z, eps, 20000, seeded(4));
  EXPECT_GE(e.mean, beurling_bound(c.distance(z), eps) - 3 * e.std_error);
}

TEST(BeurlingBound, ClosedFormValues) {
  EXPECT_DOUBLE_EQ(beurling_bound(0.3, 0.3), 0.0);
  EXPECT_NEAR(beurling_bound(0.01, 1.0), 2 / std::numbers::pi * std::atan(4.95), 1e-14);
  EXPECT_NEAR(beurling_bound(0.01, 1.0), 0.873, 5e-4);
}

TEST(BeurlingCheck, GridPasses) {
  const Slit c{1.0, -1, 1};
  const double eps = 0.2;
  for (double ratio : {0.01, 0.1, 0.5}) {
    const BeurlingReport r = beurling_check(c, {0, 1 + ratio * eps}, eps, 20000, seeded(5));
    EXPECT_NEAR(r.rho / r.eps, ratio, 1e-9);
    EXPECT_TRUE(r.pass) << ratio << " " << r.estimate.mean << " < " << r.bound;
  }
}

TEST(BeurlingCheck, RhoEqualEpsIsTrivial) {
  const BeurlingReport r = beurling_check(Slit{1.0, -1, 1}, {0, 1.25}, 0.25, 1000, seeded(5));
  EXPECT_EQ(r.bound, 0.0);
  EXPECT_TRUE(r.pass);
}

TEST(BeurlingCheck, Preconditions) {
  const Slit c{1.0, -1, 1};
  EXPECT_THROW(beurling_check(c, {0, 1.5}, 0.2, 10, seeded(6)), PreconditionError);
  EXPECT_THROW(beurling_check(Slit{1.0, 0, 0.3}, {0.1, 1.1}, 0.2, 10, seeded(6)), PreconditionError);
  EXPECT_THROW(beurling_check(Slit{0.1, -1, 1}, {0, 0.15}, 0.2, 10, seeded(6)), PreconditionError);
}

TEST(HittingProbe, MonotoneInEpsAndSmallAtReference) {
  const SlitDomain k(std::vector<Slit>{{1.0, -1, 1}});
  const HittingTable t = hitting_probe(k, {{5, 0}}, {1e-1, 1e-2, 1e-3}, 2000, seeded(7));
  EXPECT_TRUE(t.monotone);
  ASSERT_EQ(t.values.size(), 3u);
  EXPECT_EQ(t.values[0].size(), t.starts.size());
  EXPECT_LT(t.column_max.back().mean, 0.05);
}

TEST(HittingProbe, RejectsEpsNearTheSlit) {
  const SlitDomain k(std::vector<Slit>{{1.0, -1, 1}});
  EXPECT_THROW(hitting_probe(k, {{0, 0}}, {0.6}, 10, seeded(8)), PreconditionError);
  EXPECT_THROW(hitting_probe(k, {{5, 0}}, {1e-2, 1e-1}, 10, seeded(8)), PreconditionError);
}

}  // namespace
}  // namespace hcap
