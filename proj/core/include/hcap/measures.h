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

// Weak-convergence surrogate and boundary probes.
//
// The bounded-Lipschitz distance d(mu, nu) = sup |int f dmu - int f dnu| over
// ||f||_inf + Lip(f) <= 1 is bounded below by restricting f to a fixed
// dictionary of rescaled hat functions.

#pragma once

#include <cstdint>
#include <vector>

#include "hcap/geometry.h"
#include "hcap/sampler.h"

namespace hcap {

/// f_{a,s}(z) = s / (s + 1) * max(0, 1 - |z - a| / s). Sup norm s / (s + 1)
/// plus Lipschitz constant 1 / (s + 1) is exactly 1.
struct HatFunction {
  Point center;
  double scale = 1.0;

  double operator()(Point z) const;
  double sup_norm() const { return scale / (scale + 1.0); }
  double lipschitz() const { return 1.0 / (scale + 1.0); }
};

class TestDictionary {
 public:
  /// Throws PreconditionError on empty input or non-positive scales.
  TestDictionary(std::vector<Point> centers, std::vector<double> scales);

  /// nx x ny centers on [x_lo, x_hi] x [y_lo, y_hi].
  static TestDictionary grid(double x_lo, double x_hi, double y_lo, double y_hi, int nx = 21, int ny = 11,
                             std::vector<double> scales = {0.25, 1.0, 4.0});
  /// 21 x 11 grid over [-L, L] x [0, sup_im(f_tilde)] joined with the hull's
  /// horizontal window, scales {1/4, 1, 4}.
  static TestDictionary for_hull(const Hull& f_tilde, double half_width);

  std::size_t size() const { return centers_.size() * scales_.size(); }
  HatFunction member(std::size_t i) const;
  const std::vector<Point>& centers() const { return centers_; }
  const std::vector<double>& scales() const { return scales_; }

 private:
  std::vector<Point> centers_;
  std::vector<double> scales_;
};

struct SurrogateResult {
  double value = 0.0;
  /// Simultaneous Hoeffding radius over the dictionary at the given level.
  double confidence_radius = 0.0;
  std::size_t argmax = 0;
};

/// max over the dictionary of |mean_mu f - mean_nu f|, a lower bound of the
/// bounded-Lipschitz distance between the underlying measures.
SurrogateResult bl_distance_surrogate(const EmpiricalMeasure& mu, const EmpiricalMeasure& nu,
                                      const TestDictionary& dict, double alpha = 0.05);

/// Hm_D(z, B(z, eps)) for D = H \ (F u K): fraction of exits within eps of z.
Estimate regularity_probe(const Hull& f, const SlitDomain& k, Point z, double eps, std::int64_t n,
                          const WalkConfig& cfg);

/// (2/pi) arctan(1/2 (sqrt(eps/rho) - sqrt(rho/eps))).
double beurling_bound(double rho, double eps);

struct BeurlingReport {
  double rho = 0.0;
  double eps = 0.0;
  double bound = 0.0;
  Estimate estimate;
  bool pass = false;
};

/// Probability that a walk from z hits the slit before leaving B(z, eps),
/// against the projection bound. Throws PreconditionError unless
/// 0 < rho < eps, the slit is longer than 2 eps and B(z, eps) lies in H.
BeurlingReport beurling_check(const Slit& slit, Point z, double eps, std::int64_t n, const WalkConfig& cfg);

struct HittingTable {
  std::vector<double> eps;
  std::vector<Point> targets;
  std::vector<Point> starts;
  /// values[e][t * starts.size() + s]: P_start(hit B(target, eps[e]) before R).
  std::vector<std::vector<Estimate>> values;
  /// Per eps, the maximum over (target, start) and its std error.
  std::vector<Estimate> column_max;
  /// column_max[e + 1] <= column_max[e] + 3 combined std error for all e.
  bool monotone = false;
};

/// Starts are `starts_per_slit` evenly spaced points of each slit. eps must
/// be decreasing and below dist(targets, K) / 2.
HittingTable hitting_probe(const SlitDomain& k, const std::vector<Point>& targets, const std::vector<double>& eps,
                           std::int64_t n, const WalkConfig& cfg, int starts_per_slit = 5);

}  // namespace hcap
