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

// Walk-on-spheres simulation of Brownian motion absorbed on the boundary of
//   H \ (F u K u obstacle), optionally confined to a container.
//
// Mapping of first hitting times onto modes: sigma_F of the absorbed motion
// in H is ExpectationMode::kUnconditional (slits ignored); the "before K"
// functional E_z[Im Z_{sigma_F}; sigma_F < sigma_K] is kBeforeSlits, where
// the slits are absorbing and only walks that end on F contribute.

#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "hcap/geometry.h"
#include "hcap/parallel.h"
#include "hcap/rng.h"
#include "hcap/stats.h"

namespace hcap {

struct WalkConfig {
  double eps_absorb = 1e-4;
  std::int64_t max_steps = 1'000'000;
  std::uint64_t seed = 0;
  std::int64_t chunk_size = 1000;

  /// Throws PreconditionError on non-positive fields.
  void validate() const;
};

/// Absorption classification. Ties between equidistant pieces resolve in
/// enum order (RealLine < HullF < Slit(j) by index < ProbeSet).
enum class ExitTag : std::uint8_t { kRealLine, kHull, kSlit, kProbe, kTruncated };

const char* tag_name(ExitTag tag);

struct ExitSample {
  Point point;
  ExitTag tag = ExitTag::kTruncated;
  int slit = -1;
  std::int64_t steps = 0;
  /// Start point was already inside the eps-shell (or outside the domain).
  bool start_violation = false;
};

struct Domain {
  Hull hull{};
  SlitDomain slits{};
  /// Absorbing probe ball (tagged ProbeSet).
  std::optional<Ball> obstacle{};
  /// The walk lives inside this shape; leaving it is tagged ProbeSet.
  std::optional<std::variant<Ball, Rect>> container{};
  bool absorb_on_real_line = true;
};

ExitSample wos_exit(Point z, const Domain& d, const WalkConfig& cfg, Rng& rng);

/// Per-chunk bookkeeping shared by all walk reductions.
struct WalkTally {
  RunningStats stats;
  std::int64_t walks = 0;
  std::int64_t truncated = 0;
  std::int64_t violations = 0;
  std::int64_t steps = 0;

  void merge(const WalkTally& o) {
    stats.merge(o.stats);
    walks += o.walks;
    truncated += o.truncated;
    violations += o.violations;
    steps += o.steps;
  }
};

inline std::int64_t chunk_count(std::int64_t n, std::int64_t chunk_size) {
  return (n + chunk_size - 1) / chunk_size;
}

/// Runs n walks from z split into chunks of cfg.chunk_size. Chunk k uses the
/// substream (cfg.seed, stream, k); on_sample(acc, sample) folds each walk
/// into the chunk's accumulator. Returned accumulators are in chunk order.
template <class Acc, class OnSample>
std::vector<Acc> walk_chunks(Point z, const Domain& d, std::int64_t n, const WalkConfig& cfg,
                             std::uint64_t stream, OnSample on_sample) {
  const std::int64_t chunks = chunk_count(n, cfg.chunk_size);
  return run_chunks(static_cast<std::size_t>(chunks), [&](std::size_t k) {
    Acc acc{};
    Rng rng(cfg.seed, stream, k);
    const std::int64_t begin = static_cast<std::int64_t>(k) * cfg.chunk_size;
    const std::int64_t count = std::min(cfg.chunk_size, n - begin);
    for (std::int64_t i = 0; i < count; ++i) on_sample(acc, wos_exit(z, d, cfg, rng));
    return acc;
  });
}

/// Mean of value(sample) over non-truncated walks.
template <class ValueFn>
WalkTally tally_walks(Point z, const Domain& d, std::int64_t n, const WalkConfig& cfg,
                      std::uint64_t stream, ValueFn value) {
  auto parts = walk_chunks<WalkTally>(z, d, n, cfg, stream, [&](WalkTally& t, const ExitSample& s) {
    ++t.walks;
    t.steps += s.steps;
    if (s.start_violation) ++t.violations;
    if (s.tag == ExitTag::kTruncated) {
      ++t.truncated;
      return;
    }
    t.stats.add(value(s));
  });
  WalkTally total;
  for (const WalkTally& p : parts) total.merge(p);
  return total;
}

/// Converts a tally to an Estimate scaled by scale (mean and std_error),
/// filling truncation diagnostics. value_bound bounds |value| and turns
/// the truncated fraction into a bias bound in the note.
Estimate make_estimate(const WalkTally& t, const WalkConfig& cfg, double scale = 1.0,
                       double value_bound = 1.0);

struct ExitRecord {
  ExitSample sample;
  std::int64_t chunk = 0;
};

std::vector<ExitRecord> sample_exits(Point z, const Domain& d, std::int64_t n, const WalkConfig& cfg,
                                     std::uint64_t stream);

/// RFC-4180 CSV with header re,im,tag,chunk,step_count.
void write_exits_csv(std::ostream& os, const std::vector<ExitRecord>& records);

struct MeasureAtom {
  Point point;
  double weight = 1.0;
  ExitTag tag = ExitTag::kRealLine;
  int slit = -1;
};

struct EmpiricalMeasure {
  std::vector<MeasureAtom> atoms;
  double total_weight = 0.0;
  std::int64_t walks = 0;
  std::int64_t truncated = 0;

  double truncated_fraction() const {
    return walks > 0 ? static_cast<double>(truncated) / static_cast<double>(walks) : 0.0;
  }
  bool flagged() const { return truncated_fraction() > kTruncationFlagThreshold; }
  /// Normalized mass of atoms satisfying pred, with its binomial std error.
  template <class Pred>
  Estimate mass(Pred pred) const {
    RunningStats s;
    for (const MeasureAtom& a : atoms) s.add(pred(a) ? 1.0 : 0.0);
    Estimate e;
    e.mean = s.mean();
    e.std_error = s.std_error();
    e.n = s.count();
    e.truncated_fraction = truncated_fraction();
    e.flagged = flagged();
    return e;
  }
};

/// n unit-weight exit samples of the walk from z in H \ (F u K).
EmpiricalMeasure sample_harmonic_measure(Point z, const Hull& f, const SlitDomain& k, std::int64_t n,
                                         const WalkConfig& cfg,
                                         std::uint64_t stream = stream_id("harmonic-measure"));

enum class ExpectationMode { kUnconditional, kBeforeSlits };

/// E_z[Im Z_{sigma_F}] (kUnconditional) or E_z[Im Z_{sigma_F}; sigma_F < sigma_K]
/// (kBeforeSlits). Real-line exits contribute zero.
Estimate expected_im_at_hit(Point z, const Hull& f, const SlitDomain& k, ExpectationMode mode,
                            std::int64_t n, const WalkConfig& cfg,
                            std::uint64_t stream = stream_id("im-at-hit"));

}  // namespace hcap
