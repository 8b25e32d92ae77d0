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

// Hull families and the convergence experiments run on them.
//
// Every verdict here is evidence at a finite resolution and a finite set of
// indices; none of it proves convergence.

#pragma once

#include <functional>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "hcap/bmd.h"
#include "hcap/geometry.h"
#include "hcap/hcap.h"
#include "hcap/measures.h"
#include "hcap/raster.h"

namespace hcap {

enum class Monotonicity { kNone, kDecreasing, kIncreasing };

struct HullFamily {
  std::string name;
  std::string description;
  std::function<Hull(int)> generator;
  Hull limit;
  Hull envelope;
  Point z0;
  /// sup_im(envelope) < inf and hcap(envelope) < inf.
  bool satisfies_hypotheses = true;
  Monotonicity monotone = Monotonicity::kNone;
  /// Slit setup for the darned variants.
  std::optional<ChainSetup> chain;

  Hull at(int n) const { return generator(n); }
};

/// a, b, c, d, e, f (one slit), f2 (two slits), u (pocket).
std::vector<HullFamily> builtin_families();
/// Throws PreconditionError for unknown names.
HullFamily builtin_family(std::string_view name);
/// F_n = h for every n.
HullFamily constant_family(const Hull& h, const Hull& envelope, Point z0);

struct ExhaustionLevel {
  double r = 0.0;
  std::int64_t cells = 0;
  /// First tested index from which the compact stays covered; -1 if never.
  int n0 = -1;
};

struct KernelCertificate {
  bool pass = false;
  std::string verdict;
  std::optional<Point> witness;
  std::vector<int> tested;
  std::vector<ExhaustionLevel> exhaustion;
  double resolution = 0.0;
};

/// Grid evidence that H \ F_m -> H \ F_inf in the kernel sense w.r.t. z0,
/// over m = n, 2n, ..., 1024 n. First condition: each compact K_r (distance
/// >= r from the boundary, |z - z0| <= 1/r) is covered by H \ F_m along the
/// tail. Second: the z0-component of cells free for the whole tail does not
/// meet F_inf; a cell that does is returned as the witness. `claimed` replaces
/// the family's limit.
KernelCertificate check_kernel_convergence(const HullFamily& fam, int n, double resolution,
                                           std::optional<Hull> claimed = std::nullopt);

struct MonotoneLimit {
  GridMask mask;
  Monotonicity kind = Monotonicity::kNone;
  std::vector<int> tested;
  /// Cells added by filling components cut off from H \ F_tilde.
  std::int64_t filled_cells = 0;
  double hausdorff_to_limit = 0.0;
};

/// Intersection (decreasing) or filled union (increasing) of rasterized F_m
/// for m = 1, 2, 4, ..., n_max. Throws PreconditionError when the family is
/// not declared monotone or fails containment sampling.
MonotoneLimit monotone_limit(const HullFamily& fam, double resolution, int n_max = 1024);

struct ExperimentBudget {
  int nodes = 64;
  std::int64_t n_per_node = 4000;
  double half_width = 30.0;
  WalkConfig walk;
  std::int64_t n_per_slit = 20000;
  std::int64_t measure_walks = 200000;
  std::vector<double> vertical_y = {10.0, 20.0, 40.0};
  std::int64_t vertical_walks = 20000;
  double kernel_resolution = 0.02;
};

enum class EstimatorKind { kPlain, kBmd };

struct CapacityRow {
  int n = 0;
  Estimate estimate;
  std::optional<double> oracle;
  double gap = 0.0;
  double gap_std_error = 0.0;
  std::optional<double> oracle_gap;
  /// |gap - oracle_gap| <= 3 sigma when an oracle exists.
  bool consistent = true;
};

struct RobustnessCheck {
  std::string name;
  Estimate base;
  Estimate varied;
  double difference = 0.0;
  double sigma = 0.0;
  /// C fitted from a coarser pair, times the scale of the tested pair.
  double allowance = 0.0;
  double fitted_c = 0.0;
  bool pass = false;
};

struct ConvergenceReport {
  std::string family;
  bool satisfies_hypotheses = true;
  EstimatorKind estimator = EstimatorKind::kPlain;
  std::vector<CapacityRow> rows;
  Estimate limit;
  std::optional<double> limit_oracle;
  KernelCertificate kernel;
  std::vector<double> vertical_y;
  std::vector<Estimate> vertical;
  bool vertical_grows_linearly = false;
  std::vector<RobustnessCheck> robustness;
  bool pass = false;
  std::string verdict;
};

ConvergenceReport continuity_experiment(const HullFamily& fam, const std::vector<int>& n_list,
                                        EstimatorKind estimator, const ExperimentBudget& budget);

struct WeakRow {
  int n = 0;
  SurrogateResult distance;
  /// E_z0[Im Z_{sigma_{F_n}}] - E_z0[Im Z_{sigma_{F_inf}}].
  double functional_gap = 0.0;
  double functional_gap_std_error = 0.0;
  std::optional<double> oracle_gap;
};

struct WeakReport {
  std::string family;
  Point z0;
  std::vector<WeakRow> rows;
  /// Same hull as the limit, independent seed.
  SurrogateResult control;
  /// d_{n+1} <= d_n + 2 radius along the list.
  bool nonincreasing = false;
  /// d_last <= d_first / 2.
  bool halved = false;
  bool control_below_last = false;
  bool functional_gaps_consistent = false;
  bool pass = false;
  std::string verdict;
};

WeakReport weak_convergence_experiment(const HullFamily& fam, Point z0, const std::vector<int>& n_list,
                                       const TestDictionary& dict, const ExperimentBudget& budget);

}  // namespace hcap
