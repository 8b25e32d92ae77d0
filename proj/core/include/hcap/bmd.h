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

// Half-plane capacity relative to a parallel slit half-plane D = H \ K, for
// Brownian motion with darning (BMD): each slit C_j is collapsed to a point
// c*_j that the motion leaves again without being killed.
//
// BMD functionals reduce to absorbed Brownian motion through a Markov chain
// on the darned points. Around each slit sits a rectangle eta_j; nu_j is the
// law of the BMD from c*_j at its first visit to eta_j. Then
//
//   p_jk = P(walk started from nu_j reaches C_k first, before F or R)
//   q_jk = p_jk / (1 - p_jj) for k != j, q_jj = 0,   M = (I - Q)^{-1}
//   I_k  = integral over eta_k of V d nu_k,  V(z) = E_z[Im Z_{sigma_F}; sigma_F < sigma_K]
//   V*(c*_j) = sum_k M_jk I_k / (1 - p_kk)
//   V*(z)    = V(z) + sum_j phi_j(z) V*(c*_j),  phi_j(z) = P_z(first hit of K u F u R is C_j)
//
// nu_j has no direct simulation recipe. The sampler draws starts uniformly by
// arclength on the contour at distance delta around C_j, walks inside eta_j,
// and keeps walks that reach eta_j before falling back into the eps-shell of
// C_j. Acceptance weights each start by its escape probability, roughly
// delta times the normal derivative, which is the excursion entrance law up
// to O(delta). Bias is monitored by rerunning at delta / 2 and with enlarged
// rectangles.

#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <vector>

#include "hcap/geometry.h"
#include "hcap/hcap.h"
#include "hcap/sampler.h"

namespace hcap {

struct ChainSetup {
  SlitDomain slits;
  Hull f_tilde;
  /// Rectangle eta_j = [x_lo - m_j, x_hi + m_j] x [y - m_j, y + m_j].
  std::vector<double> margins;
  /// Offset of the entrance contour around each slit.
  double delta = 0.05;

  Rect curve(std::size_t j) const;
  /// Throws PreconditionError unless every margin is below half the distance
  /// from C_j to the other slits, to F_tilde and to R, and delta < min margin / 4.
  void validate() const;
  /// Same setup with all margins multiplied by `factor`.
  ChainSetup with_margin_factor(double factor) const;
  ChainSetup with_delta(double d) const;
};

struct NuSample {
  Point point;
  std::int64_t attempts = 0;
};

/// One accepted draw from the approximate entrance law on eta_j. Throws
/// NumericalError when 1e5 consecutive attempts fail (delta too small
/// relative to eps_absorb).
NuSample sample_nu(std::size_t j, const ChainSetup& setup, const WalkConfig& cfg, Rng& rng);

struct ChainEstimates {
  /// (N+1) x (N+1) row-stochastic matrix; index 0 is the cemetery c*_0.
  Eigen::MatrixXd p;
  Eigen::MatrixXd q;
  Eigen::MatrixXd m;
  Eigen::VectorXd nu_integrals;
  Eigen::VectorXd nu_integral_std_error;
  /// V*(c*_j) and its jackknife covariance over chunk groups.
  Eigen::VectorXd v_star_slits;
  Eigen::MatrixXd v_star_slits_cov;
  std::vector<std::int64_t> samples_per_slit;
  std::vector<double> acceptance_rate;
  double condition_number = 1.0;
  double spectral_radius = 0.0;
  std::int64_t truncated = 0;

  std::size_t size() const { return static_cast<std::size_t>(q.rows()); }
  /// Std error of p(j, k) (binomial).
  double p_std_error(std::size_t j, std::size_t k) const;
  /// V*(c*) - (I + P_K V*(c*)): the one-step fixed-point residual.
  Eigen::VectorXd fixed_point_residual() const;
};

/// Rate ||Q^k v||^(1/k) from k power iterations with a positive start
/// vector; robust to the periodicity that q_jj = 0 introduces.
double spectral_radius_power(const Eigen::MatrixXd& q, int iterations = 2000);

Eigen::MatrixXd neumann_sum(const Eigen::MatrixXd& q, int terms);

/// Throws PreconditionError if F is not inside F_tilde or the setup is
/// invalid; NumericalError if (I - Q) has condition number above 1e8.
ChainEstimates estimate_chain(const ChainSetup& setup, const Hull& f, std::int64_t n_per_slit,
                              const WalkConfig& cfg);

struct VStarResult {
  Estimate v_star;
  Estimate v;
  std::vector<Estimate> phi;
  /// Variance contributed by the chain (jackknife), already in v_star.
  double chain_variance = 0.0;
};

/// V*(z) = E*_z[Im Z*_{sigma_F}] via the chain. Walks from z give V, phi and
/// their covariance in one pass; the chain's uncertainty adds as an
/// independent delta-method term.
VStarResult bmd_v_star(Point z, const Hull& f, const ChainSetup& setup, const ChainEstimates& chain,
                       std::int64_t n, const WalkConfig& cfg, std::uint64_t stream = stream_id("v-star"));

struct BmdHcapJob {
  Hull hull;
  ChainSetup setup;
  /// 0 selects max(sup_im(F_tilde), max slit height) + max(1, that).
  double eta = 0.0;
  double half_width = 30.0;
  int nodes = 64;
  std::int64_t n_per_node = 4000;
  std::int64_t n_per_slit = 20000;
  WalkConfig walk;
  std::optional<double> center;
};

struct BmdHcapResult {
  HcapResult capacity;
  ChainEstimates chain;
  std::vector<std::vector<double>> phi_at_nodes;
};

BmdHcapResult bmd_hcap(const BmdHcapJob& job);

}  // namespace hcap
