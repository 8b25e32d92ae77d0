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

#include "hcap/sampler.h"

#include <cmath>
#include <cstdio>
#include <limits>
#include <numbers>
#include <ostream>

#include "hcap/errors.h"

namespace hcap {
namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

struct Nearest {
  double radius = kInf;
  ExitTag tag = ExitTag::kTruncated;
  int slit = -1;
};

// Strict < keeps the earlier piece on ties, which gives the documented
// RealLine < HullF < Slit(j) < ProbeSet order.
inline void consider(Nearest& n, double r, ExitTag tag, int slit = -1) {
  if (r < n.radius) {
    n.radius = r;
    n.tag = tag;
    n.slit = slit;
  }
}

Nearest nearest_boundary(Point z, const Domain& d) {
  Nearest n;
  if (d.absorb_on_real_line) consider(n, z.im, ExitTag::kRealLine);
  if (!d.hull.is_empty()) consider(n, dist_to_hull(d.hull, z), ExitTag::kHull);
  const auto& slits = d.slits.slits();
  for (std::size_t j = 0; j < slits.size(); ++j) {
    consider(n, slits[j].distance(z), ExitTag::kSlit, static_cast<int>(j));
  }
  if (d.obstacle) consider(n, abs(z - d.obstacle->center) - d.obstacle->radius, ExitTag::kProbe);
  if (d.container) {
    const double r = std::visit(
        [&](const auto& shape) {
          using T = std::decay_t<decltype(shape)>;
          if constexpr (std::is_same_v<T, Ball>) {
            return shape.radius - abs(z - shape.center);
          } else {
            return shape.inner_distance(z);
          }
        },
        *d.container);
    consider(n, r, ExitTag::kProbe);
  }
  return n;
}

}  // namespace

void WalkConfig::validate() const {
  if (!(eps_absorb > 0.0) || !std::isfinite(eps_absorb)) {
    throw PreconditionError("walk config: eps_absorb must be > 0");
  }
  if (max_steps <= 0) throw PreconditionError("walk config: max_steps must be > 0");
  if (chunk_size <= 0) throw PreconditionError("walk config: chunk_size must be > 0");
}

const char* tag_name(ExitTag tag) {
  switch (tag) {
    case ExitTag::kRealLine:
      return "real_line";
    case ExitTag::kHull:
      return "hull";
    case ExitTag::kSlit:
      return "slit";
    case ExitTag::kProbe:
      return "probe";
    case ExitTag::kTruncated:
      return "truncated";
  }
  return "?";
}

ExitSample wos_exit(Point z, const Domain& d, const WalkConfig& cfg, Rng& rng) {
  ExitSample out;
  out.point = z;
  for (std::int64_t step = 0; step < cfg.max_steps; ++step) {
    const Nearest n = nearest_boundary(out.point, d);
    if (!(n.radius > cfg.eps_absorb)) {
      out.tag = n.tag;
      out.slit = n.slit;
      out.steps = step;
      out.start_violation = step == 0;
      return out;
    }
    const double theta = 2.0 * std::numbers::pi * rng.uniform();
    out.point.re += n.radius * std::cos(theta);
    out.point.im += n.radius * std::sin(theta);
  }
  out.tag = ExitTag::kTruncated;
  out.steps = cfg.max_steps;
  return out;
}

Estimate make_estimate(const WalkTally& t, const WalkConfig& cfg, double scale, double value_bound) {
  Estimate e;
  e.n = t.stats.count();
  e.mean = scale * t.stats.mean();
  e.std_error = std::abs(scale) * t.stats.std_error();
  e.truncated_fraction = t.walks > 0 ? static_cast<double>(t.truncated) / static_cast<double>(t.walks) : 0.0;
  e.flagged = e.truncated_fraction > kTruncationFlagThreshold;
  char buf[256];
  std::snprintf(buf, sizeof buf,
                "eps-shell bias O(eps_absorb=%.3g); truncated fraction %.3g bounds truncation bias by %.3g%s%s",
                cfg.eps_absorb, e.truncated_fraction, std::abs(scale) * value_bound * e.truncated_fraction,
                e.flagged ? "; FLAGGED: truncation above 1e-3" : "",
                t.violations > 0 ? "; start point inside the eps-shell" : "");
  e.bias_note = buf;
  return e;
}

std::vector<ExitRecord> sample_exits(Point z, const Domain& d, std::int64_t n, const WalkConfig& cfg,
                                     std::uint64_t stream) {
  cfg.validate();
  if (n <= 0) throw PreconditionError("sample_exits: n must be > 0");
  const std::int64_t chunks = chunk_count(n, cfg.chunk_size);
  auto parts = run_chunks(static_cast<std::size_t>(chunks), [&](std::size_t k) {
    std::vector<ExitRecord> recs;
    Rng rng(cfg.seed, stream, k);
    const std::int64_t count = std::min(cfg.chunk_size, n - static_cast<std::int64_t>(k) * cfg.chunk_size);
    recs.reserve(static_cast<std::size_t>(count));
    for (std::int64_t i = 0; i < count; ++i) recs.push_back({wos_exit(z, d, cfg, rng), static_cast<std::int64_t>(k)});
    return recs;
  });
  std::vector<ExitRecord> out;
  out.reserve(static_cast<std::size_t>(n));
  for (auto& p : parts) out.insert(out.end(), p.begin(), p.end());
  return out;
}

void write_exits_csv(std::ostream& os, const std::vector<ExitRecord>& records) {
  os << "re,im,tag,chunk,step_count\r\n";
  char buf[128];
  for (const ExitRecord& r : records) {
    std::string tag = tag_name(r.sample.tag);
    if (r.sample.tag == ExitTag::kSlit) tag += std::to_string(r.sample.slit);
    std::snprintf(buf, sizeof buf, "%.17g,%.17g,", r.sample.point.re, r.sample.point.im);
    os << buf << tag << ',' << r.chunk << ',' << r.sample.steps << "\r\n";
  }
}

EmpiricalMeasure sample_harmonic_measure(Point z, const Hull& f, const SlitDomain& k, std::int64_t n,
                                         const WalkConfig& cfg, std::uint64_t stream) {
  Domain d{.hull = f, .slits = k};
  const auto records = sample_exits(z, d, n, cfg, stream);
  EmpiricalMeasure m;
  m.walks = n;
  m.atoms.reserve(records.size());
  for (const ExitRecord& r : records) {
    if (r.sample.tag == ExitTag::kTruncated) {
      ++m.truncated;
      continue;
    }
    m.atoms.push_back({r.sample.point, 1.0, r.sample.tag, r.sample.slit});
    m.total_weight += 1.0;
  }
  return m;
}

Estimate expected_im_at_hit(Point z, const Hull& f, const SlitDomain& k, ExpectationMode mode, std::int64_t n,
                            const WalkConfig& cfg, std::uint64_t stream) {
  cfg.validate();
  if (n <= 0) throw PreconditionError("expected_im_at_hit: n must be > 0");
  if (mode == ExpectationMode::kBeforeSlits && k.empty()) {
    throw PreconditionError("expected_im_at_hit: before_K mode needs a nonempty slit domain");
  }
  if (f.is_empty()) {
    Estimate e;
    e.n = n;
    e.bias_note = "empty hull: exact zero";
    return e;
  }
  Domain d{.hull = f};
  if (mode == ExpectationMode::kBeforeSlits) d.slits = k;
  const WalkTally t = tally_walks(z, d, n, cfg, stream, [](const ExitSample& s) {
    return s.tag == ExitTag::kHull ? s.point.im : 0.0;
  });
  return make_estimate(t, cfg, 1.0, sup_im(f));
}

}  // namespace hcap
