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

#include "hcap/bmd.h"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>

#include "hcap/errors.h"

namespace hcap {
namespace {

constexpr std::int64_t kMaxNuAttempts = 100'000;
constexpr double kMinAcceptance = 1e-4;
constexpr double kMaxCondition = 1e8;
constexpr int kJackknifeGroups = 20;

// Point at arclength fraction u of the stadium at distance delta around c:
// upper side, right cap, lower side, left cap.
Point stadium_point(const Slit& c, double delta, double u) {
  const double len = c.length();
  const double cap = std::numbers::pi * delta;
  double s = u * (2.0 * len + 2.0 * cap);
  if (s < len) return {c.x_lo + s, c.y + delta};
  s -= len;
  if (s < cap) {
    const double a = std::numbers::pi / 2.0 - s / delta;
    return {c.x_hi + delta * std::cos(a), c.y + delta * std::sin(a)};
  }
  s -= cap;
  if (s < len) return {c.x_hi - s, c.y - delta};
  s -= len;
  const double a = -std::numbers::pi / 2.0 - s / delta;
  return {c.x_lo + delta * std::cos(a), c.y + delta * std::sin(a)};
}

// One continuation walk: slit index k (>= 0), or -1 for the cemetery, or -2
// when truncated; value is Im Z on F.
struct Continuation {
  int state = -1;
  double value = 0.0;
};

Continuation classify(const ExitSample& s) {
  Continuation c;
  switch (s.tag) {
    case ExitTag::kSlit:
      c.state = s.slit;
      break;
    case ExitTag::kHull:
      c.value = s.point.im;
      break;
    case ExitTag::kTruncated:
      c.state = -2;
      break;
    default:
      break;
  }
  return c;
}

struct SlitSamples {
  std::vector<Continuation> draws;
  std::int64_t attempts = 0;
  std::int64_t truncated = 0;
};

struct ChainCore {
  Eigen::MatrixXd p;
  Eigen::MatrixXd q;
  Eigen::MatrixXd m;
  Eigen::VectorXd nu;
  Eigen::VectorXd v_star;
};

// Builds p, Q, M and V*(c*) from each slit's draws, leaving out the block
// [skip_lo[j], skip_hi[j]) of slit j.
ChainCore build_chain(const std::vector<SlitSamples>& samples, const std::vector<std::size_t>& skip_lo,
                      const std::vector<std::size_t>& skip_hi) {
  const std::size_t n = samples.size();
  ChainCore c;
  c.p = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(n + 1), static_cast<Eigen::Index>(n + 1));
  c.p(0, 0) = 1.0;
  c.nu = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(n));
  for (std::size_t j = 0; j < n; ++j) {
    const auto& d = samples[j].draws;
    double count = 0.0;
    for (std::size_t i = 0; i < d.size(); ++i) {
      if (i >= skip_lo[j] && i < skip_hi[j]) continue;
      count += 1.0;
      c.p(static_cast<Eigen::Index>(j + 1), d[i].state + 1) += 1.0;
      c.nu(static_cast<Eigen::Index>(j)) += d[i].value;
    }
    c.p.row(static_cast<Eigen::Index>(j + 1)) /= count;
    c.nu(static_cast<Eigen::Index>(j)) /= count;
  }
  const auto N = static_cast<Eigen::Index>(n);
  c.q = Eigen::MatrixXd::Zero(N, N);
  Eigen::VectorXd b(N);
  for (Eigen::Index j = 0; j < N; ++j) {
    const double stay = c.p(j + 1, j + 1);
    if (!(stay < 1.0)) {
      throw NumericalError("chain not substochastic enough; check geometry (every walk from eta_" +
                           std::to_string(j) + " returned to its own slit)");
    }
    for (Eigen::Index k = 0; k < N; ++k) {
      if (k != j) c.q(j, k) = c.p(j + 1, k + 1) / (1.0 - stay);
    }
    b(j) = c.nu(j) / (1.0 - stay);
  }
  c.m = (Eigen::MatrixXd::Identity(N, N) - c.q).inverse();
  c.v_star = c.m * b;
  return c;
}

double condition_number(const Eigen::MatrixXd& a) {
  if (a.size() == 0) return 1.0;
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(a);
  const auto& s = svd.singularValues();
  const double lo = s(s.size() - 1);
  return lo > 0.0 ? s(0) / lo : std::numeric_limits<double>::infinity();
}

void check_point_in_domain(Point z, const Hull& f, const SlitDomain& k, double eps, const char* who) {
  bool ok = z.im > eps && (f.is_empty() || dist_to_hull(f, z) > eps);
  for (const Slit& s : k.slits()) ok = ok && s.distance(z) > eps;
  if (!ok) throw PreconditionError(std::string(who) + ": point must lie in D \\ F, outside the eps-shell");
}

}  // namespace

Rect ChainSetup::curve(std::size_t j) const {
  const Slit& c = slits[j];
  const double m = margins[j];
  return {c.x_lo - m, c.x_hi + m, c.y - m, c.y + m};
}

void ChainSetup::validate() const {
  if (margins.size() != slits.size()) throw PreconditionError("chain setup: need one margin per slit");
  if (!(delta > 0.0)) throw PreconditionError("chain setup: delta must be > 0");
  double min_margin = std::numeric_limits<double>::infinity();
  for (std::size_t j = 0; j < slits.size(); ++j) {
    const Slit& c = slits[j];
    const double m = margins[j];
    if (!(m > 0.0)) throw PreconditionError("chain setup: margins must be > 0");
    min_margin = std::min(min_margin, m);
    double room = c.y;
    for (std::size_t k = 0; k < slits.size(); ++k) {
      if (k != j) room = std::min(room, slit_gap(c, slits[k]));
    }
    room = std::min(room, slit_hull_distance(c, f_tilde));
    if (!(m < 0.5 * room)) {
      std::ostringstream os;
      os << "chain setup: margin " << m << " of slit " << j
         << " must be below half the distance to R, F_tilde and the other slits (" << 0.5 * room << ")";
      throw PreconditionError(os.str());
    }
  }
  if (!slits.empty() && !(delta < 0.25 * min_margin)) {
    throw PreconditionError("chain setup: delta must be below min margin / 4");
  }
}

ChainSetup ChainSetup::with_margin_factor(double factor) const {
  ChainSetup s = *this;
  for (double& m : s.margins) m *= factor;
  return s;
}

ChainSetup ChainSetup::with_delta(double d) const {
  ChainSetup s = *this;
  s.delta = d;
  return s;
}

NuSample sample_nu(std::size_t j, const ChainSetup& setup, const WalkConfig& cfg, Rng& rng) {
  if (j >= setup.slits.size()) throw PreconditionError("sample_nu: slit index out of range");
  if (!(setup.delta > cfg.eps_absorb)) {
    throw NumericalError("sample_nu: delta too small relative to eps_absorb");
  }
  const Slit& c = setup.slits[j];
  const Rect rect = setup.curve(j);
  const Domain annulus{.slits = SlitDomain(std::vector<Slit>{c}), .container = rect, .absorb_on_real_line = false};
  NuSample out;
  while (out.attempts < kMaxNuAttempts) {
    ++out.attempts;
    const Point start = stadium_point(c, setup.delta, rng.uniform());
    const ExitSample s = wos_exit(start, annulus, cfg, rng);
    if (s.tag == ExitTag::kProbe) {
      out.point = rect.project(s.point);
      return out;
    }
  }
  throw NumericalError("sample_nu: no acceptance in 1e5 attempts; delta too small relative to eps_absorb");
}

double ChainEstimates::p_std_error(std::size_t j, std::size_t k) const {
  if (j == 0) return 0.0;
  const double n = static_cast<double>(samples_per_slit[j - 1]);
  const double pv = p(static_cast<Eigen::Index>(j), static_cast<Eigen::Index>(k));
  return n > 1 ? std::sqrt(pv * (1.0 - pv) / (n - 1.0)) : 0.0;
}

Eigen::VectorXd ChainEstimates::fixed_point_residual() const {
  const auto n = static_cast<Eigen::Index>(size());
  const Eigen::MatrixXd pk = p.block(1, 1, n, n);
  return v_star_slits - (nu_integrals + pk * v_star_slits);
}

double spectral_radius_power(const Eigen::MatrixXd& q, int iterations) {
  if (q.rows() == 0) return 0.0;
  Eigen::VectorXd v = Eigen::VectorXd::Ones(q.rows());
  v /= v.norm();
  double log_growth = 0.0;
  int counted = 0;
  for (int it = 0; it < iterations; ++it) {
    v = q * v;
    const double norm = v.norm();
    if (norm == 0.0) return 0.0;
    v /= norm;
    if (it >= iterations / 2) {
      log_growth += std::log(norm);
      ++counted;
    }
  }
  return std::exp(log_growth / counted);
}

Eigen::MatrixXd neumann_sum(const Eigen::MatrixXd& q, int terms) {
  Eigen::MatrixXd sum = Eigen::MatrixXd::Identity(q.rows(), q.cols());
  Eigen::MatrixXd power = sum;
  for (int k = 1; k <= terms; ++k) {
    power = power * q;
    sum += power;
  }
  return sum;
}

ChainEstimates estimate_chain(const ChainSetup& setup, const Hull& f, std::int64_t n_per_slit,
                              const WalkConfig& cfg) {
  cfg.validate();
  setup.validate();
  if (n_per_slit < 2) throw PreconditionError("estimate_chain: n_per_slit must be >= 2");
  if (!hull_contained_in(f, setup.f_tilde, 4000, cfg.seed ^ 0xf7ULL)) {
    throw PreconditionError("estimate_chain: F is not contained in F_tilde");
  }
  const std::size_t n = setup.slits.size();
  const Domain full{.hull = f, .slits = setup.slits};
  const std::int64_t chunks = chunk_count(n_per_slit, cfg.chunk_size);

  auto parts = run_chunks(n * static_cast<std::size_t>(chunks), [&](std::size_t task) {
    const std::size_t j = task / static_cast<std::size_t>(chunks);
    const std::size_t k = task % static_cast<std::size_t>(chunks);
    Rng rng(cfg.seed, stream_id("nu-chain", j), k);
    const std::int64_t count = std::min(cfg.chunk_size, n_per_slit - static_cast<std::int64_t>(k) * cfg.chunk_size);
    SlitSamples out;
    out.draws.reserve(static_cast<std::size_t>(count));
    for (std::int64_t i = 0; i < count; ++i) {
      const NuSample nu = sample_nu(j, setup, cfg, rng);
      out.attempts += nu.attempts;
      const Continuation c = classify(wos_exit(nu.point, full, cfg, rng));
      if (c.state == -2) {
        ++out.truncated;
        continue;
      }
      out.draws.push_back(c);
    }
    return out;
  });

  std::vector<SlitSamples> samples(n);
  ChainEstimates ce;
  for (std::size_t task = 0; task < parts.size(); ++task) {
    SlitSamples& dst = samples[task / static_cast<std::size_t>(chunks)];
    dst.draws.insert(dst.draws.end(), parts[task].draws.begin(), parts[task].draws.end());
    dst.attempts += parts[task].attempts;
    dst.truncated += parts[task].truncated;
  }
  for (std::size_t j = 0; j < n; ++j) {
    const double rate = static_cast<double>(n_per_slit) / static_cast<double>(samples[j].attempts);
    if (rate < kMinAcceptance) throw NumericalError("estimate_chain: delta too small relative to eps_absorb");
    if (samples[j].draws.size() < 2) throw NumericalError("estimate_chain: too many truncated walks");
    ce.acceptance_rate.push_back(rate);
    ce.samples_per_slit.push_back(static_cast<std::int64_t>(samples[j].draws.size()));
    ce.truncated += samples[j].truncated;
  }

  const std::vector<std::size_t> none(n, 0);
  const ChainCore full_chain = build_chain(samples, none, none);
  ce.p = full_chain.p;
  ce.q = full_chain.q;
  ce.m = full_chain.m;
  ce.nu_integrals = full_chain.nu;
  ce.v_star_slits = full_chain.v_star;
  const auto N = static_cast<Eigen::Index>(n);
  ce.condition_number = condition_number(Eigen::MatrixXd::Identity(N, N) - ce.q);
  if (!(ce.condition_number <= kMaxCondition)) {
    throw NumericalError("estimate_chain: chain not substochastic enough; check geometry (cond(I - Q) > 1e8)");
  }
  ce.spectral_radius = spectral_radius_power(ce.q);

  ce.nu_integral_std_error = Eigen::VectorXd::Zero(N);
  for (std::size_t j = 0; j < n; ++j) {
    RunningStats s;
    for (const Continuation& c : samples[j].draws) s.add(c.value);
    ce.nu_integral_std_error(static_cast<Eigen::Index>(j)) = s.std_error();
  }

  // Leave-one-block-out jackknife; block g of slit j is a contiguous run of
  // its draws in chunk order.
  ce.v_star_slits_cov = Eigen::MatrixXd::Zero(N, N);
  if (n > 0) {
    std::size_t groups = kJackknifeGroups;
    for (const SlitSamples& s : samples) groups = std::min(groups, s.draws.size());
    std::vector<Eigen::VectorXd> leave_out;
    for (std::size_t g = 0; g < groups; ++g) {
      std::vector<std::size_t> lo(n), hi(n);
      for (std::size_t j = 0; j < n; ++j) {
        const std::size_t size = samples[j].draws.size();
        lo[j] = size * g / groups;
        hi[j] = size * (g + 1) / groups;
      }
      leave_out.push_back(build_chain(samples, lo, hi).v_star);
    }
    Eigen::VectorXd mean = Eigen::VectorXd::Zero(N);
    for (const auto& v : leave_out) mean += v;
    mean /= static_cast<double>(groups);
    for (const auto& v : leave_out) ce.v_star_slits_cov += (v - mean) * (v - mean).transpose();
    ce.v_star_slits_cov *= static_cast<double>(groups - 1) / static_cast<double>(groups);
  }
  return ce;
}

namespace {

// Per-walk value V + sum_j phi_j c_j together with the phi tallies.
struct DarnedTally {
  RunningStats combined;
  RunningStats v;
  std::vector<RunningStats> phi;
  std::int64_t walks = 0;
  std::int64_t truncated = 0;

  void merge(const DarnedTally& o) {
    combined.merge(o.combined);
    v.merge(o.v);
    if (phi.size() < o.phi.size()) phi.resize(o.phi.size());
    for (std::size_t j = 0; j < o.phi.size(); ++j) phi[j].merge(o.phi[j]);
    walks += o.walks;
    truncated += o.truncated;
  }
};

DarnedTally darned_walks(Point z, const Domain& d, const Eigen::VectorXd& c, std::int64_t n, const WalkConfig& cfg,
                         std::uint64_t stream) {
  const std::size_t slits = d.slits.size();
  auto parts = walk_chunks<DarnedTally>(z, d, n, cfg, stream, [&](DarnedTally& t, const ExitSample& s) {
    if (t.phi.size() != slits) t.phi.resize(slits);
    ++t.walks;
    if (s.tag == ExitTag::kTruncated) {
      ++t.truncated;
      return;
    }
    const double v = s.tag == ExitTag::kHull ? s.point.im : 0.0;
    double extra = 0.0;
    for (std::size_t j = 0; j < slits; ++j) {
      const bool hit = s.tag == ExitTag::kSlit && static_cast<std::size_t>(s.slit) == j;
      t.phi[j].add(hit ? 1.0 : 0.0);
      if (hit) extra = c(static_cast<Eigen::Index>(j));
    }
    t.v.add(v);
    t.combined.add(v + extra);
  });
  DarnedTally total;
  total.phi.resize(slits);
  for (const DarnedTally& p : parts) total.merge(p);
  return total;
}

Estimate to_estimate(const RunningStats& s, const DarnedTally& t) {
  Estimate e;
  e.mean = s.mean();
  e.std_error = s.std_error();
  e.n = s.count();
  e.truncated_fraction = t.walks > 0 ? static_cast<double>(t.truncated) / static_cast<double>(t.walks) : 0.0;
  e.flagged = e.truncated_fraction > kTruncationFlagThreshold;
  return e;
}

}  // namespace

VStarResult bmd_v_star(Point z, const Hull& f, const ChainSetup& setup, const ChainEstimates& chain, std::int64_t n,
                       const WalkConfig& cfg, std::uint64_t stream) {
  cfg.validate();
  if (n <= 0) throw PreconditionError("bmd_v_star: n must be > 0");
  if (chain.size() != setup.slits.size()) throw PreconditionError("bmd_v_star: chain does not match the setup");
  check_point_in_domain(z, f, setup.slits, cfg.eps_absorb, "bmd_v_star");
  VStarResult r;
  if (f.is_empty()) {
    r.v_star.n = r.v.n = n;
    r.v_star.bias_note = r.v.bias_note = "empty hull: exact zero";
    r.phi.resize(setup.slits.size());
    return r;
  }
  const Domain d{.hull = f, .slits = setup.slits};
  const DarnedTally t = darned_walks(z, d, chain.v_star_slits, n, cfg, stream);
  r.v = to_estimate(t.v, t);
  r.v_star = to_estimate(t.combined, t);
  Eigen::VectorXd phi(static_cast<Eigen::Index>(t.phi.size()));
  for (std::size_t j = 0; j < t.phi.size(); ++j) {
    r.phi.push_back(to_estimate(t.phi[j], t));
    phi(static_cast<Eigen::Index>(j)) = t.phi[j].mean();
  }
  if (phi.size() > 0) r.chain_variance = phi.dot(chain.v_star_slits_cov * phi);
  r.v_star.std_error = std::sqrt(r.v_star.std_error * r.v_star.std_error + r.chain_variance);
  std::ostringstream note;
  note << "chain entrance-law bias O(delta=" << setup.delta << "); eps-shell bias O(" << cfg.eps_absorb
       << "); truncated fraction " << r.v_star.truncated_fraction;
  if (r.v_star.flagged) note << "; FLAGGED: truncation above 1e-3";
  r.v_star.bias_note = note.str();
  return r;
}

BmdHcapResult bmd_hcap(const BmdHcapJob& job) {
  job.walk.validate();
  const Hull& f = job.hull;
  const double ceiling = std::max(sup_im(job.setup.f_tilde), job.setup.slits.max_height());
  const double eta = job.eta > 0.0 ? job.eta : ceiling + std::max(1.0, ceiling);
  if (!(eta > ceiling) || !(eta > sup_im(f))) {
    std::ostringstream os;
    os << "bmd_hcap: integration height eta = " << eta << " must satisfy eta > max(Im F_tilde, slit heights) = "
       << ceiling << " (the expression holds for any eta > Im F)";
    throw PreconditionError(os.str());
  }
  if (!(job.half_width > 0.0)) throw PreconditionError("bmd_hcap: half_width L must be > 0");
  if (job.nodes < 16) throw PreconditionError("bmd_hcap: need at least 16 quadrature nodes");
  if (job.n_per_node <= 0) throw PreconditionError("bmd_hcap: n_per_node must be > 0");

  BmdHcapResult out;
  HcapResult& r = out.capacity;
  r.eta = eta;
  r.half_width = job.half_width;
  r.center = job.center.value_or(default_quadrature_center(f));
  if (job.setup.slits.empty()) {
    job.setup.validate();
  } else {
    out.chain = estimate_chain(job.setup, f, job.n_per_slit, job.walk);
  }
  const auto slits = static_cast<Eigen::Index>(job.setup.slits.size());
  if (job.setup.slits.empty()) {
    out.chain.p = Eigen::MatrixXd::Identity(1, 1);
    out.chain.q = out.chain.m = out.chain.v_star_slits_cov = Eigen::MatrixXd::Zero(0, 0);
    out.chain.nu_integrals = out.chain.nu_integral_std_error = out.chain.v_star_slits = Eigen::VectorXd::Zero(0);
  }
  if (f.is_empty()) {
    r.estimate.n = job.n_per_node * job.nodes;
    r.estimate.bias_note = "empty hull: exact zero";
    return out;
  }
  const HullDiagnostics diag = validate_hull(f, std::max(1.0, sup_im(f)) / 32.0);
  if (!diag.pass) throw PreconditionError("bmd_hcap: hull failed validation: " + diag.message);

  const Domain d{.hull = f, .slits = job.setup.slits};
  double sum = 0.0;
  double var = 0.0;
  std::int64_t truncated = 0;
  std::int64_t walks = 0;
  std::int64_t used = 0;
  Eigen::VectorXd a = Eigen::VectorXd::Zero(slits);
  const auto grid = trapezoid_nodes(r.center, job.half_width, job.nodes);
  for (std::size_t i = 0; i < grid.size(); ++i) {
    const auto [xi, w] = grid[i];
    const DarnedTally t = darned_walks({xi, eta}, d, out.chain.v_star_slits, job.n_per_node, job.walk,
                                       stream_id("bmd-node", i));
    const Estimate e = to_estimate(t.combined, t);
    r.nodes.push_back({xi, w, e});
    std::vector<double> phi;
    for (Eigen::Index j = 0; j < slits; ++j) {
      phi.push_back(t.phi[static_cast<std::size_t>(j)].mean());
      a(j) += w * phi.back();
    }
    out.phi_at_nodes.push_back(std::move(phi));
    sum += w * e.mean;
    var += w * w * e.std_error * e.std_error;
    truncated += t.truncated;
    walks += t.walks;
    used += t.combined.count();
  }
  if (slits > 0) var += a.dot(out.chain.v_star_slits_cov * a);
  constexpr double kPi = std::numbers::pi;
  finalize_capacity(r, sum / kPi, var / (kPi * kPi), used, walks, truncated, job.nodes, job.walk.eps_absorb);
  if (slits > 0) {
    std::ostringstream note;
    note << "; chain entrance-law bias O(delta=" << job.setup.delta << ")";
    r.estimate.bias_note += note.str();
  }
  return out;
}

}  // namespace hcap
