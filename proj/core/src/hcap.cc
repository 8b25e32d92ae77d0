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

#include "hcap/hcap.h"

#include <cmath>
#include <complex>
#include <numbers>
#include <sstream>

#include "hcap/errors.h"

namespace hcap {
namespace {

bool has_infinite_capacity(const Hull& h) {
  return std::visit(
      [](const auto& v) -> bool {
        using T = std::decay_t<decltype(v)>;
        if constexpr (std::is_same_v<T, Ridge>) {
          return v.profile.kind == ProfileKind::kConstant;
        } else if constexpr (std::is_same_v<T, HullUnion>) {
          for (const Hull& p : v.parts) {
            if (has_infinite_capacity(p)) return true;
          }
          return false;
        } else if constexpr (std::is_same_v<T, Shifted> || std::is_same_v<T, Scaled>) {
          return has_infinite_capacity(*v.inner);
        } else {
          return false;
        }
      },
      h.variant());
}

}  // namespace

std::optional<double> hcap_exact(const Hull& h) {
  return std::visit(
      [](const auto& v) -> std::optional<double> {
        using T = std::decay_t<decltype(v)>;
        if constexpr (std::is_same_v<T, EmptyHull>) {
          return 0.0;
        } else if constexpr (std::is_same_v<T, VerticalSlit>) {
          return 0.5 * v.height * v.height;
        } else if constexpr (std::is_same_v<T, HalfDisk>) {
          return v.radius * v.radius;
        } else if constexpr (std::is_same_v<T, Shifted>) {
          return hcap_exact(*v.inner);
        } else if constexpr (std::is_same_v<T, Scaled>) {
          auto inner = hcap_exact(*v.inner);
          if (!inner) return std::nullopt;
          return v.factor * v.factor * *inner;
        } else {
          return std::nullopt;
        }
      },
      h.variant());
}

std::optional<double> expected_im_exact(const Hull& h, Point z) {
  using C = std::complex<double>;
  return std::visit(
      [z](const auto& v) -> std::optional<double> {
        using T = std::decay_t<decltype(v)>;
        if constexpr (std::is_same_v<T, EmptyHull>) {
          return 0.0;
        } else if constexpr (std::is_same_v<T, VerticalSlit>) {
          const C w(z.re - v.base, z.im);
          C g = std::sqrt(w * w + v.height * v.height);
          if (g.imag() < 0.0) g = -g;
          return z.im - g.imag();
        } else if constexpr (std::is_same_v<T, HalfDisk>) {
          const C w(z.re - v.center, z.im);
          if (std::abs(w) <= v.radius) return z.im;
          return z.im - (w + v.radius * v.radius / w).imag();
        } else if constexpr (std::is_same_v<T, Shifted>) {
          return expected_im_exact(*v.inner, {z.re - v.offset, z.im});
        } else if constexpr (std::is_same_v<T, Scaled>) {
          auto inner = expected_im_exact(*v.inner, z / v.factor);
          if (!inner) return std::nullopt;
          return v.factor * *inner;
        } else {
          return std::nullopt;
        }
      },
      h.variant());
}

double default_quadrature_center(const Hull& h) {
  if (h.is_empty()) return 0.0;
  const auto [lo, hi] = horizontal_window(h, 1e-3 * std::max(sup_im(h), 1e-300));
  return 0.5 * (lo + hi);
}

double HcapJob::default_eta(const Hull& h) {
  const double top = sup_im(h);
  return top + std::max(1.0, top);
}

double tail_fraction(double half_width, double eta) {
  return 1.0 - 2.0 / std::numbers::pi * std::atan(half_width / eta);
}

std::vector<std::pair<double, double>> trapezoid_nodes(double center, double half_width, int nodes) {
  std::vector<std::pair<double, double>> out;
  out.reserve(static_cast<std::size_t>(nodes));
  const double h = 2.0 * half_width / (nodes - 1);
  for (int i = 0; i < nodes; ++i) {
    const double w = (i == 0 || i == nodes - 1) ? 0.5 * h : h;
    out.emplace_back(center - half_width + h * i, w);
  }
  return out;
}

void finalize_capacity(HcapResult& r, double quadrature, double quadrature_var, std::int64_t used,
                       std::int64_t walks, std::int64_t truncated, int nodes, double eps_absorb) {
  r.quadrature = quadrature;
  r.quadrature_std_error = std::sqrt(quadrature_var);
  // One fixed-point pass of h = I + tau * h on the running estimate.
  const double tau = tail_fraction(r.half_width, r.eta);
  r.tail_correction = tau * r.quadrature;
  r.estimate.mean = r.quadrature + r.tail_correction;
  r.estimate.std_error = (1.0 + tau) * r.quadrature_std_error;
  r.estimate.n = used;
  r.estimate.truncated_fraction = walks > 0 ? static_cast<double>(truncated) / static_cast<double>(walks) : 0.0;
  r.increase_half_width = std::abs(r.tail_correction) > 0.1 * std::abs(r.estimate.mean);
  r.estimate.flagged = r.estimate.truncated_fraction > kTruncationFlagThreshold || r.increase_half_width;

  std::ostringstream note;
  note << "trapezoid on " << nodes << " uniform nodes over [" << r.center - r.half_width << ", "
       << r.center + r.half_width << "], eta=" << r.eta << "; tail correction " << r.tail_correction
       << " from far-field model hcap*eta/(xi^2+eta^2); eps-shell bias O(" << eps_absorb
       << "); truncated fraction " << r.estimate.truncated_fraction;
  if (r.increase_half_width) note << "; FLAGGED: tail correction above 10% of estimate, increase L";
  if (r.estimate.truncated_fraction > kTruncationFlagThreshold) note << "; FLAGGED: truncation above 1e-3";
  r.estimate.bias_note = note.str();
}

HcapResult hcap_integral(const HcapJob& job) {
  job.walk.validate();
  const Hull& f = job.hull;
  const double eta = job.eta > 0.0 ? job.eta : HcapJob::default_eta(f);
  const double top = sup_im(f);
  if (!(eta > top)) {
    std::ostringstream os;
    os << "hcap_integral: integration height eta = " << eta << " must satisfy eta > Im F = " << top
       << " (the expression holds for any eta > Im F)";
    throw PreconditionError(os.str());
  }
  if (!(job.half_width > 0.0)) throw PreconditionError("hcap_integral: half_width L must be > 0");
  if (job.nodes < 16) throw PreconditionError("hcap_integral: need at least 16 quadrature nodes");
  if (job.n_per_node <= 0) throw PreconditionError("hcap_integral: n_per_node must be > 0");
  if (has_infinite_capacity(f)) {
    throw PreconditionError("hcap_integral: hull contains a non-decaying ridge (infinite capacity)");
  }

  HcapResult r;
  r.eta = eta;
  r.half_width = job.half_width;
  r.center = job.center.value_or(default_quadrature_center(f));
  if (f.is_empty()) {
    r.estimate.n = job.n_per_node * job.nodes;
    r.estimate.bias_note = "empty hull: exact zero";
    return r;
  }
  if (job.validate) {
    const HullDiagnostics diag = validate_hull(f, std::max(1.0, top) / 32.0);
    if (!diag.pass) throw PreconditionError("hcap_integral: hull failed validation: " + diag.message);
  }

  const Domain d{.hull = f};
  double sum = 0.0;
  double var = 0.0;
  std::int64_t truncated = 0;
  std::int64_t walks = 0;
  std::int64_t used = 0;
  const auto grid = trapezoid_nodes(r.center, job.half_width, job.nodes);
  for (std::size_t i = 0; i < grid.size(); ++i) {
    const auto [xi, w] = grid[i];
    const WalkTally t = tally_walks({xi, eta}, d, job.n_per_node, job.walk, stream_id("hcap-node", i),
                                    [](const ExitSample& s) { return s.tag == ExitTag::kHull ? s.point.im : 0.0; });
    const Estimate e = make_estimate(t, job.walk, 1.0, top);
    r.nodes.push_back({xi, w, e});
    sum += w * e.mean;
    var += w * w * e.std_error * e.std_error;
    truncated += t.truncated;
    walks += t.walks;
    used += t.stats.count();
  }
  finalize_capacity(r, sum / std::numbers::pi, var / (std::numbers::pi * std::numbers::pi), used, walks,
                    truncated, job.nodes, job.walk.eps_absorb);
  return r;
}

std::vector<Estimate> hcap_vertical(const Hull& h, const std::vector<double>& ys, std::int64_t n,
                                    const WalkConfig& cfg) {
  cfg.validate();
  const double top = sup_im(h);
  for (double y : ys) {
    if (!(y > top)) throw PreconditionError("hcap_vertical: every y must exceed Im F");
  }
  std::vector<Estimate> out;
  out.reserve(ys.size());
  for (std::size_t i = 0; i < ys.size(); ++i) {
    const double y = ys[i];
    if (h.is_empty()) {
      Estimate e;
      e.n = n;
      e.bias_note = "empty hull: exact zero";
      out.push_back(e);
      continue;
    }
    const Domain d{.hull = h};
    const WalkTally t = tally_walks({0.0, y}, d, n, cfg, stream_id("hcap-vertical", i),
                                    [](const ExitSample& s) { return s.tag == ExitTag::kHull ? s.point.im : 0.0; });
    Estimate e = make_estimate(t, cfg, y, top);
    e.bias_note += "; finite-y bias O(1/y) relative to the limit";
    out.push_back(e);
  }
  return out;
}

MonotoneReport check_monotone(const Hull& f, const Hull& f_big, const std::vector<Point>& probes, std::int64_t n,
                              const HcapJob& capacity) {
  if (!hull_contained_in(f, f_big, 4000, capacity.walk.seed ^ 0x5eedULL)) {
    throw PreconditionError("check_monotone: F is not contained in F_big (membership sampling)");
  }
  const double eps = capacity.walk.eps_absorb;
  for (const Point& z : probes) {
    if (!(z.im > eps) || !(dist_to_hull(f_big, z) > eps)) {
      throw PreconditionError("check_monotone: probes must lie in H \\ F_big");
    }
  }
  MonotoneReport rep;
  rep.pointwise_ordered = true;
  for (std::size_t i = 0; i < probes.size(); ++i) {
    MonotoneProbe p;
    p.z = probes[i];
    WalkConfig cs = capacity.walk;
    WalkConfig cb = capacity.walk;
    cb.seed = splitmix64(capacity.walk.seed ^ 0xb16ULL);
    p.small = expected_im_at_hit(p.z, f, {}, ExpectationMode::kUnconditional, n, cs, stream_id("mono-probe", i));
    p.big = expected_im_at_hit(p.z, f_big, {}, ExpectationMode::kUnconditional, n, cb, stream_id("mono-probe", i));
    p.ordered = p.small.mean <= p.big.mean + 3.0 * combined_std_error(p.small, p.big);
    rep.pointwise_ordered = rep.pointwise_ordered && p.ordered;
    rep.probes.push_back(p);
  }

  HcapJob js = capacity;
  js.hull = f;
  js.eta = capacity.eta > 0.0 ? capacity.eta : HcapJob::default_eta(f_big);
  HcapJob jb = js;
  jb.hull = f_big;
  jb.walk.seed = splitmix64(capacity.walk.seed ^ 0xb16ULL);
  rep.small_capacity = hcap_integral(js);
  rep.big_capacity = hcap_integral(jb);
  const Estimate& a = rep.small_capacity.estimate;
  const Estimate& b = rep.big_capacity.estimate;
  const double sigma = combined_std_error(a, b);
  rep.capacity_ordered = a.mean <= b.mean + 3.0 * sigma;

  const auto ea = hcap_exact(f);
  const auto eb = hcap_exact(f_big);
  if (ea && eb) rep.analytic_gap = *eb - *ea;
  rep.separation_required = rep.analytic_gap && *rep.analytic_gap > 6.0 * sigma;
  rep.separated = a.mean + 3.0 * a.std_error < b.mean - 3.0 * b.std_error;
  rep.pass = rep.pointwise_ordered && rep.capacity_ordered && (!rep.separation_required || rep.separated);
  return rep;
}

}  // namespace hcap
