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

#include "hcap/measures.h"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include "hcap/errors.h"

namespace hcap {
namespace {

// Weighted means of every dictionary member under m, ordered as member(i).
std::vector<double> dictionary_means(const EmpiricalMeasure& m, const TestDictionary& dict) {
  const auto& centers = dict.centers();
  const auto& scales = dict.scales();
  std::vector<double> sums(dict.size(), 0.0);
  for (const MeasureAtom& a : m.atoms) {
    for (std::size_t c = 0; c < centers.size(); ++c) {
      const double r = abs(a.point - centers[c]);
      for (std::size_t s = 0; s < scales.size(); ++s) {
        const double sc = scales[s];
        if (r < sc) sums[c * scales.size() + s] += a.weight * (sc / (sc + 1.0)) * (1.0 - r / sc);
      }
    }
  }
  if (m.total_weight > 0.0) {
    for (double& v : sums) v /= m.total_weight;
  }
  return sums;
}

Estimate fraction_estimate(const WalkTally& t, const WalkConfig& cfg) { return make_estimate(t, cfg, 1.0, 1.0); }

}  // namespace

double HatFunction::operator()(Point z) const {
  const double r = abs(z - center);
  return r < scale ? sup_norm() * (1.0 - r / scale) : 0.0;
}

TestDictionary::TestDictionary(std::vector<Point> centers, std::vector<double> scales)
    : centers_(std::move(centers)), scales_(std::move(scales)) {
  if (centers_.empty() || scales_.empty()) throw PreconditionError("test dictionary: needs centers and scales");
  for (double s : scales_) {
    if (!(s > 0.0) || !std::isfinite(s)) throw PreconditionError("test dictionary: scales must be > 0");
  }
}

TestDictionary TestDictionary::grid(double x_lo, double x_hi, double y_lo, double y_hi, int nx, int ny,
                                    std::vector<double> scales) {
  if (nx < 1 || ny < 1 || !(x_lo <= x_hi) || !(y_lo <= y_hi)) {
    throw PreconditionError("test dictionary: bad grid");
  }
  std::vector<Point> centers;
  centers.reserve(static_cast<std::size_t>(nx * ny));
  for (int i = 0; i < nx; ++i) {
    const double x = nx == 1 ? 0.5 * (x_lo + x_hi) : x_lo + (x_hi - x_lo) * i / (nx - 1);
    for (int j = 0; j < ny; ++j) {
      const double y = ny == 1 ? 0.5 * (y_lo + y_hi) : y_lo + (y_hi - y_lo) * j / (ny - 1);
      centers.push_back({x, y});
    }
  }
  return TestDictionary(std::move(centers), std::move(scales));
}

TestDictionary TestDictionary::for_hull(const Hull& f_tilde, double half_width) {
  double lo = -half_width;
  double hi = half_width;
  const double top = sup_im(f_tilde);
  if (!f_tilde.is_empty()) {
    if (const auto ext = horizontal_extent(f_tilde)) {
      lo = std::min(lo, ext->first);
      hi = std::max(hi, ext->second);
    }
  }
  return grid(lo, hi, 0.0, top, 21, 11);
}

HatFunction TestDictionary::member(std::size_t i) const {
  return {centers_[i / scales_.size()], scales_[i % scales_.size()]};
}

SurrogateResult bl_distance_surrogate(const EmpiricalMeasure& mu, const EmpiricalMeasure& nu,
                                      const TestDictionary& dict, double alpha) {
  if (!(alpha > 0.0 && alpha < 1.0)) throw PreconditionError("bl_distance_surrogate: alpha must be in (0, 1)");
  if (!(mu.total_weight > 0.0) || !(nu.total_weight > 0.0)) {
    throw PreconditionError("bl_distance_surrogate: both measures need positive mass");
  }
  const std::vector<double> a = dictionary_means(mu, dict);
  const std::vector<double> b = dictionary_means(nu, dict);
  SurrogateResult r;
  for (std::size_t i = 0; i < a.size(); ++i) {
    const double d = std::abs(a[i] - b[i]);
    if (d > r.value) {
      r.value = d;
      r.argmax = i;
    }
  }
  // Members take values in [0, 1); union bound over members and both measures.
  const double log_term = std::log(4.0 * static_cast<double>(dict.size()) / alpha);
  r.confidence_radius = std::sqrt(log_term / (2.0 * static_cast<double>(mu.atoms.size()))) +
                        std::sqrt(log_term / (2.0 * static_cast<double>(nu.atoms.size())));
  return r;
}

Estimate regularity_probe(const Hull& f, const SlitDomain& k, Point z, double eps, std::int64_t n,
                          const WalkConfig& cfg) {
  cfg.validate();
  if (!(eps > 0.0)) throw PreconditionError("regularity_probe: eps must be > 0");
  if (n <= 0) throw PreconditionError("regularity_probe: n must be > 0");
  bool inside = z.im > 0.0 && !contains(f, z);
  for (const Slit& s : k.slits()) inside = inside && s.distance(z) > 0.0;
  if (!inside) throw PreconditionError("regularity_probe: z must lie in H \\ (F u K)");
  const Domain d{.hull = f, .slits = k};
  const WalkTally t = tally_walks(z, d, n, cfg, stream_id("regularity"), [&](const ExitSample& s) {
    return abs(s.point - z) < eps ? 1.0 : 0.0;
  });
  return fraction_estimate(t, cfg);
}

double beurling_bound(double rho, double eps) {
  return 2.0 / std::numbers::pi * std::atan(0.5 * (std::sqrt(eps / rho) - std::sqrt(rho / eps)));
}

BeurlingReport beurling_check(const Slit& slit, Point z, double eps, std::int64_t n, const WalkConfig& cfg) {
  cfg.validate();
  BeurlingReport r;
  r.eps = eps;
  r.rho = slit.distance(z);
  if (!(r.rho > 0.0) || !(r.rho <= eps)) throw PreconditionError("beurling_check: need 0 < rho <= eps");
  if (!(slit.length() > 2.0 * eps)) throw PreconditionError("beurling_check: slit must be longer than 2 eps");
  if (!(z.im > eps)) throw PreconditionError("beurling_check: B(z, eps) must lie in H");
  r.bound = beurling_bound(r.rho, eps);
  const Domain d{.slits = SlitDomain(std::vector<Slit>{slit}), .container = Ball{z, eps},
                 .absorb_on_real_line = false};
  const WalkTally t = tally_walks(z, d, n, cfg, stream_id("beurling"), [](const ExitSample& s) {
    return s.tag == ExitTag::kSlit ? 1.0 : 0.0;
  });
  r.estimate = fraction_estimate(t, cfg);
  r.pass = r.estimate.mean >= r.bound - 3.0 * r.estimate.std_error;
  return r;
}

HittingTable hitting_probe(const SlitDomain& k, const std::vector<Point>& targets, const std::vector<double>& eps,
                           std::int64_t n, const WalkConfig& cfg, int starts_per_slit) {
  cfg.validate();
  if (k.empty() || targets.empty() || eps.empty()) {
    throw PreconditionError("hitting_probe: needs slits, targets and eps values");
  }
  if (starts_per_slit < 1 || n <= 0) throw PreconditionError("hitting_probe: bad sample counts");
  for (std::size_t e = 0; e < eps.size(); ++e) {
    if (!(eps[e] > 0.0) || (e > 0 && !(eps[e] < eps[e - 1]))) {
      throw PreconditionError("hitting_probe: eps list must be positive and strictly decreasing");
    }
  }
  double gap = std::numeric_limits<double>::infinity();
  for (const Point& t : targets) {
    if (t.im < 0.0) throw PreconditionError("hitting_probe: targets must lie in the closed half-plane");
    for (const Slit& s : k.slits()) gap = std::min(gap, s.distance(t));
  }
  if (!(eps.front() < 0.5 * gap)) {
    throw PreconditionError("hitting_probe: every eps must be below dist(S, K) / 2");
  }

  HittingTable table;
  table.eps = eps;
  table.targets = targets;
  for (const Slit& s : k.slits()) {
    for (int i = 0; i < starts_per_slit; ++i) {
      table.starts.push_back({s.x_lo + s.length() * (i + 0.5) / starts_per_slit, s.y});
    }
  }
  std::uint64_t index = 0;
  for (double e : eps) {
    std::vector<Estimate> row;
    Estimate best;
    best.mean = -1.0;
    for (const Point& t : targets) {
      const Domain d{.obstacle = Ball{t, e}};
      for (const Point& w : table.starts) {
        const WalkTally tally = tally_walks(w, d, n, cfg, stream_id("hitting", index++), [](const ExitSample& s) {
          return s.tag == ExitTag::kProbe ? 1.0 : 0.0;
        });
        row.push_back(fraction_estimate(tally, cfg));
        if (row.back().mean > best.mean) best = row.back();
      }
    }
    table.values.push_back(std::move(row));
    table.column_max.push_back(best);
  }
  table.monotone = true;
  for (std::size_t e = 1; e < eps.size(); ++e) {
    const Estimate& a = table.column_max[e - 1];
    const Estimate& b = table.column_max[e];
    table.monotone = table.monotone && b.mean <= a.mean + 3.0 * combined_std_error(a, b);
  }
  return table;
}

}  // namespace hcap
