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

// Half-plane capacity estimators for simply connected complements.
//
// The primary estimator integrates the hitting functional along a horizontal
// line above the hull,
//
//   hcap(F) = (1/pi) * integral over R of E_{xi + i eta}[Im Z_{sigma_F}] d xi,
//
// valid for any eta > sup Im F. The definition-style estimator
// y * E_{iy}[Im Z_{sigma_F}] for large y is kept as an independent check.

#pragma once

#include <optional>
#include <vector>

#include "hcap/geometry.h"
#include "hcap/sampler.h"

namespace hcap {

/// Closed-form capacity for Empty, VerticalSlit (h^2 / 2), HalfDisk (r^2) and
/// their shifts and scalings; nullopt when no closed form is known.
std::optional<double> hcap_exact(const Hull& h);

/// E_z[Im Z_{sigma_F}] = Im(z - g_F(z)) from the mapping-out function, for
/// the same shapes as hcap_exact; nullopt otherwise.
std::optional<double> expected_im_exact(const Hull& h, Point z);

struct HcapJob {
  Hull hull;
  /// Integration height; 0 selects sup_im + max(1, sup_im).
  double eta = 0.0;
  /// Quadrature covers [center - half_width, center + half_width].
  double half_width = 30.0;
  int nodes = 64;
  std::int64_t n_per_node = 4000;
  WalkConfig walk;
  /// Quadrature center; defaults to the middle of the hull's horizontal window.
  std::optional<double> center;
  /// Run validate_hull before sampling.
  bool validate = true;

  static double default_eta(const Hull& h);
};

struct NodeValue {
  double xi = 0.0;
  double weight = 0.0;
  Estimate value;
};

struct HcapResult {
  Estimate estimate;
  double quadrature = 0.0;
  double quadrature_std_error = 0.0;
  double tail_correction = 0.0;
  double eta = 0.0;
  double half_width = 0.0;
  double center = 0.0;
  /// Tail correction exceeds 10% of the estimate.
  bool increase_half_width = false;
  std::vector<NodeValue> nodes;
};

/// Tail fraction tau(L, eta) = 1 - (2/pi) arctan(L / eta): the share of
/// (1/pi) * integral of hcap * eta / (xi^2 + eta^2) lying outside [-L, L].
double tail_fraction(double half_width, double eta);

/// Middle of the hull's horizontal window (0 for the empty hull).
double default_quadrature_center(const Hull& h);

/// Uniform trapezoid nodes and weights on [center - L, center + L].
std::vector<std::pair<double, double>> trapezoid_nodes(double center, double half_width, int nodes);

/// Fills estimate, tail correction and flags of r from the quadrature value
/// (already divided by pi) and its variance.
void finalize_capacity(HcapResult& r, double quadrature, double quadrature_var, std::int64_t used,
                       std::int64_t walks, std::int64_t truncated, int nodes, double eps_absorb);

/// Throws PreconditionError (before any sampling) when eta <= sup_im(hull).
HcapResult hcap_integral(const HcapJob& job);

/// y * E_{iy}[Im Z_{sigma_F}] for each y; every y must exceed sup_im(h).
std::vector<Estimate> hcap_vertical(const Hull& h, const std::vector<double>& ys, std::int64_t n,
                                    const WalkConfig& cfg);

struct MonotoneProbe {
  Point z;
  Estimate small;
  Estimate big;
  bool ordered = false;
};

struct MonotoneReport {
  std::vector<MonotoneProbe> probes;
  HcapResult small_capacity;
  HcapResult big_capacity;
  bool pointwise_ordered = false;
  bool capacity_ordered = false;
  std::optional<double> analytic_gap;
  /// Analytic gap exceeds 6 combined std errors, so separation is asserted.
  bool separation_required = false;
  /// The two 3-sigma intervals are disjoint.
  bool separated = false;
  bool pass = false;
};

/// Checks E_z[Im Z_{sigma_F}] <= E_z[Im Z_{sigma_F_big}] at the probes and
/// hcap(F) <= hcap(F_big), asserting strict separation when the closed-form
/// gap is resolvable. `capacity` supplies the quadrature budget (its hull is
/// ignored). Throws PreconditionError if F is not inside F_big.
MonotoneReport check_monotone(const Hull& f, const Hull& f_big, const std::vector<Point>& probes,
                              std::int64_t n, const HcapJob& capacity);

}  // namespace hcap
