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
#include "hcap/hcap.h"
#include "oracles.h"

namespace hcap {
namespace {

using testing::Complex;

HcapJob job_for(const Hull& h, std::uint64_t seed) {
  HcapJob job;
  job.hull = h;
  job.walk.seed = seed;
  return job;
}

TEST(HcapExact, SlitMatchesMapExpansion) {
  for (auto [x0, h] : {std::pair{0.0, 1.0}, std::pair{0.3, 1.7}, std::pair{-2.0, 0.25}}) {
    const double series = testing::capacity_from_map([&](Complex z) { return testing::slit_map(z, x0, h); });
    EXPECT_NEAR(series, h * h / 2, 1e-10);
    EXPECT_NEAR(*hcap_exact(Hull::vertical_slit(x0, h)), series, 1e-10);
  }
}

TEST(HcapExact, DiskMatchesMapExpansion) {
  for (auto [c, r] : {std::pair{0.0, 1.0}, std::pair{1.5, 0.4}}) {
    const double series = testing::capacity_from_map([&](Complex z) { return testing::disk_map(z, c, r); });
    EXPECT_NEAR(*hcap_exact(Hull::half_disk(c, r)), series, 1e-10);
  }
}

TEST(HcapExact, EmptyShiftScaleAndUnknown) {
  EXPECT_EQ(*hcap_exact(Hull::empty()), 0.0);
  EXPECT_NEAR(*hcap_exact(Hull::scaled(Hull::vertical_slit(0, 1), 3)), 4.5, 1e-12);
  EXPECT_NEAR(*hcap_exact(Hull::shifted(Hull::half_disk(0, 2), 5)), 4.0, 1e-12);
  EXPECT_FALSE(hcap_exact(Hull::ridge(RidgeProfile::lorentzian(0.3, 0, 1))).has_value());
}

TEST(ExpectedImExact, MatchesMappingOutFunction) {
  for (Point z : {Point{0, 2}, Point{1, 0.5}, Point{-3, 1}, Point{0.2, 0.1}}) {
    const Complex w(z.re, z.im);
    const double slit = (w - testing::slit_map(w, 0.0L, 1.0L)).imag();
    EXPECT_NEAR(*expected_im_exact(Hull::vertical_slit(0, 1), z), slit, 1e-12);
    if (std::hypot(z.re, z.im) > 1) {
      const double disk = (w - testing::disk_map(w, 0.0L, 1.0L)).imag();
      EXPECT_NEAR(*expected_im_exact(Hull::half_disk(0, 1), z), disk, 1e-12);
    }
  }
  EXPECT_NEAR(*expected_im_exact(Hull::vertical_slit(0, 1), {0, 2}), 2 - std::sqrt(3.0), 1e-14);
}

TEST(TailFraction, MatchesPoissonMassOutsideWindow) {
  for (auto [l, eta] : {std::pair{30.0, 2.0}, std::pair{60.0, 1.5}, std::pair{5.0, 4.0}}) {
    EXPECT_NEAR(tail_fraction(l, eta), 1.0 - testing::poisson_mass(0, eta, -l, l), 1e-14);
  }
}

TEST(TrapezoidNodes, IntegratesLinearExactly) {
  const auto nodes = trapezoid_nodes(1.0, 2.0, 17);
  ASSERT_EQ(nodes.size(), 17u);
  double mass = 0.0;
  double first = 0.0;
  for (auto [x, w] : nodes) {
    mass += w;
    first += w * x;
  }
  EXPECT_NEAR(mass, 4.0, 1e-12);
  EXPECT_NEAR(first, 4.0, 1e-12);
  EXPECT_DOUBLE_EQ(nodes.front().first, -1.0);
  EXPECT_DOUBLE_EQ(nodes.back().first, 3.0);
}

TEST(HcapIntegral, SlitAtWideWindow) {
  HcapJob job = job_for(Hull::vertical_slit(0, 1), 21);
  job.eta = 1.5;
  job.half_width = 60;
  const HcapResult r = hcap_integral(job);
  EXPECT_LE(r.estimate.std_error, 0.01);
  EXPECT_LE(std::abs(r.estimate.mean - 0.5), 3 * r.estimate.std_error);
  EXPECT_EQ(r.nodes.size(), 64u);
  EXPECT_FALSE(r.increase_half_width);
}

TEST(HcapIntegral, EmptyHullIsExactZero) {
  const HcapResult r = hcap_integral(job_for(Hull::empty(), 1));
  EXPECT_EQ(r.estimate.mean, 0.0);
  EXPECT_EQ(r.estimate.std_error, 0.0);
}

TEST(HcapIntegral, EtaBelowHullIsRejectedBeforeSampling) {
  HcapJob job = job_for(Hull::vertical_slit(0, 1), 1);
  job.eta = 0.5;
  try {
    hcap_integral(job);
    FAIL() << "expected PreconditionError";
  } catch (const PreconditionError& e) {
    EXPECT_NE(std::string(e.what()).find("for any eta > Im F"), std::string::npos);
  }
}

TEST(HcapIntegral, RejectsInfiniteCapacityAndInvalidHulls) {
  EXPECT_THROW(hcap_integral(job_for(Hull::ridge(RidgeProfile::constant(1)), 1)), PreconditionError);
  EXPECT_THROW(hcap_integral(job_for(Hull::polyline({{-1, 0}, {-1, 1}, {1, 1}, {1, 0}}), 1)), PreconditionError);
}

TEST(HcapIntegral, ScalingByTwoQuadruplesSlit) {
  HcapJob a = job_for(Hull::vertical_slit(0, 1), 22);
  HcapJob b = job_for(Hull::scaled(Hull::vertical_slit(0, 1), 2), 23);
  const Estimate ea = hcap_integral(a).estimate;
  const Estimate eb = hcap_integral(b).estimate;
  const double ratio = eb.mean / ea.mean;
  const double rel = std::hypot(ea.std_error / ea.mean, eb.std_error / eb.mean);
  EXPECT_LE(std::abs(ratio - 4.0), 3 * 4.0 * rel);
}

TEST(HcapIntegral, SameSeedIsBitIdentical) {
  HcapJob job = job_for(Hull::half_disk(0, 1), 5);
  job.n_per_node = 500;
  const HcapResult a = hcap_integral(job);
  const HcapResult b = hcap_integral(job);
  EXPECT_EQ(a.estimate.mean, b.estimate.mean);
  EXPECT_EQ(a.estimate.std_error, b.estimate.std_error);
  EXPECT_EQ(a.estimate.bias_note, b.estimate.bias_note);
}

TEST(HcapVertical, SlitFarAway) {
  const auto e = hcap_vertical(Hull::vertical_slit(0, 1), {100}, 200000, WalkConfig{.seed = 31});
  // y E_{iy}[Im Z] = y (y - sqrt(y^2 - 1)) differs from 1/2 by O(1/y^2).
  EXPECT_LE(std::abs(e[0].mean - 0.5), 1.0 / 100 + 3 * e[0].std_error);
}

TEST(HcapVertical, EmptyIsZeroAndLowYRejected) {
  for (const Estimate& e : hcap_vertical(Hull::empty(), {10, 20}, 100, WalkConfig{})) EXPECT_EQ(e.mean, 0.0);
  EXPECT_THROW(hcap_vertical(Hull::vertical_slit(0, 1), {0.5}, 100, WalkConfig{}), PreconditionError);
}

TEST(HcapVertical, AgreesWithIntegralOnLorentzian) {
  const Hull h = Hull::ridge(RidgeProfile::lorentzian(0.3, 0, 1));
  const Estimate integral = hcap_integral(job_for(h, 41)).estimate;
  const auto vertical = hcap_vertical(h, {20, 50, 100}, 200000, WalkConfig{.seed = 42});
  for (const Estimate& v : vertical) {
    EXPECT_LE(std::abs(v.mean - integral.mean), 3 * combined_std_error(v, integral)) << v.mean;
  }
}

TEST(CheckMonotone, NestedSlitsSeparate) {
  HcapJob cap = job_for(Hull::empty(), 51);
  const MonotoneReport r = check_monotone(Hull::vertical_slit(0, 0.8), Hull::vertical_slit(0, 1),
                                          {{0, 2}, {1, 1}, {-2, 0.5}}, 5000, cap);
  EXPECT_TRUE(r.pass);
  EXPECT_TRUE(r.separation_required);
  EXPECT_TRUE(r.separated);
  EXPECT_NEAR(*r.analytic_gap, 0.18, 1e-12);
  EXPECT_LE(std::abs(r.small_capacity.estimate.mean - 0.32), 3 * r.small_capacity.estimate.std_error);
}

TEST(CheckMonotone, IdenticalHullsHoldTrivially) {
  HcapJob cap = job_for(Hull::empty(), 52);
  cap.n_per_node = 1000;
  const MonotoneReport r =
      check_monotone(Hull::half_disk(0, 1), Hull::half_disk(0, 1), {{0, 2}}, 2000, cap);
  EXPECT_TRUE(r.pass);
  EXPECT_FALSE(r.separation_required);
  EXPECT_EQ(*r.analytic_gap, 0.0);
}

TEST(CheckMonotone, NestedDisks) {
  HcapJob cap = job_for(Hull::empty(), 53);
  const MonotoneReport r = check_monotone(Hull::half_disk(0, 0.5), Hull::half_disk(0, 1), {{0, 2}}, 5000, cap);
  EXPECT_TRUE(r.pass);
  EXPECT_TRUE(r.separated);
}

TEST(CheckMonotone, RejectsNonNestedPair) {
  HcapJob cap = job_for(Hull::empty(), 54);
  EXPECT_THROW(check_monotone(Hull::vertical_slit(0, 1), Hull::vertical_slit(0, 0.8), {{0, 2}}, 10, cap),
               PreconditionError);
}

}  // namespace
}  // namespace hcap
