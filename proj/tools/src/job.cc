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


#include "job.h"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <map>
#include <numbers>
#include <set>
#include <sstream>

#include "csv.h"
#include "hcap/bmd.h"
#include "hcap/errors.h"
#include "hcap/hcap.h"
#include "hcap/hull_json.h"
#include "hcap/measures.h"
#include "hcap/sampler.h"
#include "hcap/sequences.h"

namespace hcap::cli {
namespace {

struct Schema {
  json defaults;
  std::set<std::string> required;
};

json walk_defaults() {
  const WalkConfig w;
  return {{"eps_absorb", w.eps_absorb}, {"max_steps", w.max_steps}, {"chunk_size", w.chunk_size}};
}

json quadrature_defaults() {
  return {{"eta", 0.0}, {"half_width", 30.0}, {"nodes", 64}, {"n_per_node", 4000}, {"center", nullptr}};
}

json dictionary_defaults() {
  return {{"x_lo", -10.0}, {"x_hi", 10.0}, {"y_lo", 0.0}, {"y_hi", 4.0},
          {"nx", 21},      {"ny", 11},     {"scales", {0.25, 1.0, 4.0}}};
}

const std::map<std::string, Schema>& schemas() {
  static const std::map<std::string, Schema> table = [] {
    std::map<std::string, Schema> t;
    t["validate"] = {{{"hull", nullptr}, {"slits", json::array()}, {"resolution", 0.01}}, {"hull"}};
    json hcap_keys = quadrature_defaults();
    hcap_keys["hull"] = nullptr;
    hcap_keys["validate"] = true;
    t["hcap"] = {hcap_keys, {"hull"}};
    json bmd_keys = quadrature_defaults();
    bmd_keys.update({{"hull", nullptr},
                     {"slits", nullptr},
                     {"f_tilde", nullptr},
                     {"margins", nullptr},
                     {"delta", 0.0},
                     {"n_per_slit", 20000}});
    t["bmd-hcap"] = {bmd_keys, {"hull", "slits"}};
    t["hm-sample"] = {{{"hull", {{"kind", "empty"}}},
                       {"slits", json::array()},
                       {"z", nullptr},
                       {"n", 10000}},
                      {"z"}};
    t["hm-distance"] = {{{"hull_a", {{"kind", "empty"}}},
                         {"slits_a", json::array()},
                         {"hull_b", {{"kind", "empty"}}},
                         {"slits_b", json::array()},
                         {"z", nullptr},
                         {"n", 100000},
                         {"alpha", 0.05},
                         {"dictionary", dictionary_defaults()}},
                        {"z"}};
    t["probe-regularity"] = {{{"hull", {{"kind", "empty"}}},
                              {"slits", json::array()},
                              {"z", nullptr},
                              {"eps", {0.1}},
                              {"n", 100000}},
                             {"z"}};
    t["probe-beurling"] = {{{"slit", nullptr}, {"z", nullptr}, {"eps", {0.1}}, {"n", 100000}}, {"slit", "z"}};
    t["probe-hitting"] = {{{"slits", nullptr},
                           {"targets", nullptr},
                           {"eps", {0.1, 0.01, 0.001}},
                           {"n", 20000},
                           {"starts_per_slit", 5}},
                          {"slits", "targets"}};
    const ExperimentBudget b;
    t["experiment"] = {{{"kind", nullptr},
                        {"family", nullptr},
                        {"n_list", {1, 2, 4, 8, 16}},
                        {"estimator", "plain"},
                        {"z0", nullptr},
                        {"nodes", b.nodes},
                        {"n_per_node", b.n_per_node},
                        {"half_width", b.half_width},
                        {"n_per_slit", b.n_per_slit},
                        {"measure_walks", b.measure_walks},
                        {"vertical_y", b.vertical_y},
                        {"vertical_walks", b.vertical_walks},
                        {"kernel_resolution", b.kernel_resolution},
                        {"resolution", 0.02},
                        {"n_max", 1024},
                        {"dictionary", nullptr}},
                       {"kind"}};
    for (auto& [name, s] : t) {
      s.defaults["version"] = 1;
      s.defaults["command"] = name;
      s.defaults["seed"] = nullptr;
      s.defaults["out"] = ".";
      s.defaults["walk"] = walk_defaults();
      s.required.insert("seed");
    }
    return t;
  }();
  return table;
}

const char* kind_name(json::value_t t) {
  switch (t) {
    case json::value_t::null: return "null";
    case json::value_t::object: return "object";
    case json::value_t::array: return "array";
    case json::value_t::string: return "string";
    case json::value_t::boolean: return "boolean";
    default: return "number";
  }
}

bool same_kind(const json& a, const json& b) {
  if (a.is_number() && b.is_number()) {
    // An integer default only accepts integers.
    return !(a.is_number_integer() && !b.is_number_integer());
  }
  return a.type() == b.type();
}

// Layers `layer` onto `config`, checking keys and types against `defaults`.
// A null default accepts any value; "walk" and "dictionary" are checked key
// by key, other objects (hulls) are replaced whole.
void apply_layer(json& config, const json& layer, const json& defaults, const std::string& path) {
  if (!layer.is_object()) throw PreconditionError("job: " + (path.empty() ? "top level" : path) + " must be an object");
  for (const auto& [key, value] : layer.items()) {
    const std::string where = path.empty() ? key : path + "." + key;
    if (!defaults.contains(key)) throw PreconditionError("job: unknown key '" + where + "'");
    const json& d = defaults.at(key);
    if ((key == "walk" || key == "dictionary") && d.is_object()) {
      apply_layer(config[key], value, d, where);
      continue;
    }
    if (!d.is_null() && !value.is_null() && !same_kind(d, value)) {
      throw PreconditionError("job: key '" + where + "' must be " + (d.is_number_integer() ? "an integer" : kind_name(d.type())) +
                              ", got " + kind_name(value.type()));
    }
    config[key] = value;
  }
}

// "a.b=v" style overrides arrive flat; nest them before layering.
json nest_overrides(const json& flat) {
  json out = json::object();
  for (const auto& [key, value] : flat.items()) {
    json* node = &out;
    std::size_t start = 0;
    for (std::size_t dot = key.find('.'); dot != std::string::npos; dot = key.find('.', start)) {
      node = &(*node)[key.substr(start, dot - start)];
      start = dot + 1;
    }
    (*node)[key.substr(start)] = value;
  }
  return out;
}

json estimate_json(const Estimate& e) {
  return {{"mean", e.mean},
          {"std_error", e.std_error},
          {"n", e.n},
          {"truncated_fraction", e.truncated_fraction},
          {"flagged", e.flagged},
          {"bias_note", e.bias_note}};
}

json matrix_json(const Eigen::MatrixXd& m) {
  json rows = json::array();
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    json row = json::array();
    for (Eigen::Index j = 0; j < m.cols(); ++j) row.push_back(m(i, j));
    rows.push_back(row);
  }
  return rows;
}

std::string matrix_csv(const Eigen::MatrixXd& m) {
  std::vector<std::string> header{"row"};
  for (Eigen::Index j = 0; j < m.cols(); ++j) header.push_back("c" + std::to_string(j));
  CsvWriter w(header);
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    std::vector<std::string> row{CsvWriter::num(static_cast<long long>(i))};
    for (Eigen::Index j = 0; j < m.cols(); ++j) row.push_back(CsvWriter::num(m(i, j)));
    w.row(row);
  }
  return w.str();
}

void flag_if(JobOutput& out, const Estimate& e, const std::string& what) {
  if (e.flagged && !out.numerical_flag) {
    out.numerical_flag = true;
    out.flag_reason = what + ": truncated fraction " + std::to_string(e.truncated_fraction) + " above threshold";
  }
}

WalkConfig walk_from(const json& c) {
  WalkConfig w;
  w.eps_absorb = c.at("walk").at("eps_absorb").get<double>();
  w.max_steps = c.at("walk").at("max_steps").get<std::int64_t>();
  w.chunk_size = c.at("walk").at("chunk_size").get<std::int64_t>();
  w.seed = c.at("seed").get<std::uint64_t>();
  w.validate();
  return w;
}

std::vector<double> doubles(const json& j, const char* what) {
  if (!j.is_array() || j.empty()) throw PreconditionError(std::string("job: '") + what + "' must be a non-empty array");
  std::vector<double> v;
  for (const json& x : j) {
    if (!x.is_number()) throw PreconditionError(std::string("job: '") + what + "' must hold numbers");
    v.push_back(x.get<double>());
  }
  return v;
}

std::int64_t positive(const json& c, const char* key) {
  const std::int64_t v = c.at(key).get<std::int64_t>();
  if (v <= 0) throw PreconditionError(std::string("job: '") + key + "' must be > 0");
  return v;
}

std::string nodes_csv(const HcapResult& r) {
  CsvWriter w({"xi", "weight", "mean", "std_error", "n", "truncated_fraction"});
  for (const NodeValue& nv : r.nodes) {
    w.row({CsvWriter::num(nv.xi), CsvWriter::num(nv.weight), CsvWriter::num(nv.value.mean),
           CsvWriter::num(nv.value.std_error), CsvWriter::num(static_cast<long long>(nv.value.n)),
           CsvWriter::num(nv.value.truncated_fraction)});
  }
  return w.str();
}

json capacity_json(const HcapResult& r) {
  return {{"estimate", r.estimate.mean},
          {"stderr", r.estimate.std_error},
          {"tail_correction", r.tail_correction},
          {"truncated_fraction", r.estimate.truncated_fraction},
          {"quadrature", r.quadrature},
          {"eta", r.eta},
          {"half_width", r.half_width},
          {"center", r.center},
          {"increase_half_width", r.increase_half_width},
          {"bias_note", r.estimate.bias_note}};
}

// Each margin is 0.4 of the distance from C_j to the nearest other slit, to
// F_tilde and to R, which keeps it below the required half.
std::vector<double> default_margins(const SlitDomain& k, const Hull& f_tilde) {
  std::vector<double> m;
  for (std::size_t j = 0; j < k.size(); ++j) {
    double d = k[j].y;
    for (std::size_t i = 0; i < k.size(); ++i) {
      if (i != j) d = std::min(d, slit_gap(k[j], k[i]));
    }
    if (!f_tilde.is_empty()) d = std::min(d, slit_hull_distance(k[j], f_tilde));
    m.push_back(0.4 * d);
  }
  return m;
}

JobOutput run_validate(const json& c) {
  JobOutput out;
  const Hull h = hull_from_json(c.at("hull"));
  const SlitDomain k = slits_from_json(c.at("slits"));
  const double res = c.at("resolution").get<double>();
  if (!(res > 0.0)) throw PreconditionError("job: 'resolution' must be > 0");
  const HullDiagnostics d = validate_hull(h, res);
  std::string slit_message;
  bool slits_ok = true;
  for (std::size_t j = 0; j < k.size() && slits_ok && !h.is_empty(); ++j) {
    if (slit_hull_distance(k[j], h) <= 0.0) {
      slits_ok = false;
      slit_message = "slit " + std::to_string(j) + " meets the hull";
    }
  }
  out.results = {{"pass", d.pass && slits_ok},
                 {"hull_pass", d.pass},
                 {"message", d.message},
                 {"cells", d.cells},
                 {"resolution", d.resolution},
                 {"slits_pass", slits_ok},
                 {"slit_message", slit_message},
                 {"sup_im", sup_im(h)}};
  out.results["offending_cell"] = d.offending_cell ? point_to_json(*d.offending_cell) : json(nullptr);
  out.invalid = !(d.pass && slits_ok);
  return out;
}

void fill_quadrature(const json& c, double& eta, double& half_width, int& nodes, std::int64_t& n_per_node,
                     std::optional<double>& center) {
  eta = c.at("eta").get<double>();
  half_width = c.at("half_width").get<double>();
  nodes = c.at("nodes").get<int>();
  n_per_node = positive(c, "n_per_node");
  if (!c.at("center").is_null()) {
    if (!c.at("center").is_number()) throw PreconditionError("job: 'center' must be a number or null");
    center = c.at("center").get<double>();
  }
}

JobOutput run_hcap(const json& c) {
  JobOutput out;
  HcapJob job;
  job.hull = hull_from_json(c.at("hull"));
  fill_quadrature(c, job.eta, job.half_width, job.nodes, job.n_per_node, job.center);
  job.validate = c.at("validate").get<bool>();
  job.walk = walk_from(c);
  const HcapResult r = hcap_integral(job);
  out.results = capacity_json(r);
  const auto exact = hcap_exact(job.hull);
  out.results["exact"] = exact ? json(*exact) : json(nullptr);
  out.artifacts.push_back({"nodes.csv", nodes_csv(r)});
  flag_if(out, r.estimate, "capacity");
  return out;
}

JobOutput run_bmd_hcap(const json& c) {
  JobOutput out;
  BmdHcapJob job;
  job.hull = hull_from_json(c.at("hull"));
  job.setup.slits = slits_from_json(c.at("slits"));
  job.setup.f_tilde = c.at("f_tilde").is_null() ? job.hull : hull_from_json(c.at("f_tilde"));
  job.setup.margins = c.at("margins").is_null() ? default_margins(job.setup.slits, job.setup.f_tilde)
                                                : doubles(c.at("margins"), "margins");
  const double delta = c.at("delta").get<double>();
  if (delta > 0.0) {
    job.setup.delta = delta;
  } else if (!job.setup.margins.empty()) {
    job.setup.delta = std::min(0.05, 0.2 * *std::min_element(job.setup.margins.begin(), job.setup.margins.end()));
  }
  fill_quadrature(c, job.eta, job.half_width, job.nodes, job.n_per_node, job.center);
  job.n_per_slit = positive(c, "n_per_slit");
  job.walk = walk_from(c);
  const BmdHcapResult r = bmd_hcap(job);
  out.results = capacity_json(r.capacity);
  out.results["margins"] = job.setup.margins;
  out.results["delta"] = job.setup.delta;
  const ChainEstimates& ch = r.chain;
  json chain = {{"p", matrix_json(ch.p)},
                {"q", matrix_json(ch.q)},
                {"m", matrix_json(ch.m)},
                {"condition_number", ch.condition_number},
                {"spectral_radius", ch.spectral_radius},
                {"truncated", ch.truncated},
                {"samples_per_slit", ch.samples_per_slit},
                {"acceptance_rate", ch.acceptance_rate}};
  chain["nu_integrals"] = std::vector<double>(ch.nu_integrals.data(), ch.nu_integrals.data() + ch.nu_integrals.size());
  chain["v_star_slits"] =
      std::vector<double>(ch.v_star_slits.data(), ch.v_star_slits.data() + ch.v_star_slits.size());
  out.results["chain"] = chain;
  out.artifacts.push_back({"nodes.csv", nodes_csv(r.capacity)});
  if (ch.p.size() > 0) {
    out.artifacts.push_back({"chain_p.csv", matrix_csv(ch.p)});
    out.artifacts.push_back({"chain_q.csv", matrix_csv(ch.q)});
    out.artifacts.push_back({"chain_m.csv", matrix_csv(ch.m)});
  }
  flag_if(out, r.capacity.estimate, "capacity");
  return out;
}

JobOutput run_hm_sample(const json& c) {
  JobOutput out;
  const Hull h = hull_from_json(c.at("hull"));
  const SlitDomain k = slits_from_json(c.at("slits"));
  const Point z = point_from_json(c.at("z"));
  const WalkConfig w = walk_from(c);
  const std::vector<ExitRecord> records =
      sample_exits(z, Domain{.hull = h, .slits = k}, positive(c, "n"), w, stream_id("hm-sample"));
  std::map<std::string, std::int64_t> counts;
  std::int64_t truncated = 0;
  for (const ExitRecord& r : records) {
    ++counts[tag_name(r.sample.tag)];
    if (r.sample.tag == ExitTag::kTruncated) ++truncated;
  }
  const double frac = records.empty() ? 0.0 : static_cast<double>(truncated) / static_cast<double>(records.size());
  out.results = {{"walks", records.size()}, {"tag_counts", counts}, {"truncated_fraction", frac}};
  std::ostringstream os;
  write_exits_csv(os, records);
  out.artifacts.push_back({"exits.csv", os.str()});
  if (frac > kTruncationFlagThreshold) {
    out.numerical_flag = true;
    out.flag_reason = "truncated fraction " + std::to_string(frac) + " above threshold";
  }
  return out;
}

double hat_mean(const EmpiricalMeasure& m, const HatFunction& f) {
  double s = 0.0;
  for (const MeasureAtom& a : m.atoms) s += a.weight * f(a.point);
  return m.total_weight > 0.0 ? s / m.total_weight : 0.0;
}

TestDictionary dictionary_from(const json& d) {
  json full = dictionary_defaults();
  apply_layer(full, d, dictionary_defaults(), "dictionary");
  return TestDictionary::grid(full.at("x_lo").get<double>(), full.at("x_hi").get<double>(),
                              full.at("y_lo").get<double>(), full.at("y_hi").get<double>(), full.at("nx").get<int>(),
                              full.at("ny").get<int>(), doubles(full.at("scales"), "dictionary.scales"));
}

JobOutput run_hm_distance(const json& c) {
  JobOutput out;
  const Point z = point_from_json(c.at("z"));
  const WalkConfig w = walk_from(c);
  const std::int64_t n = positive(c, "n");
  const EmpiricalMeasure a = sample_harmonic_measure(z, hull_from_json(c.at("hull_a")), slits_from_json(c.at("slits_a")),
                                                     n, w, stream_id("hm-distance", 0));
  const EmpiricalMeasure b = sample_harmonic_measure(z, hull_from_json(c.at("hull_b")), slits_from_json(c.at("slits_b")),
                                                     n, w, stream_id("hm-distance", 1));
  const TestDictionary dict = dictionary_from(c.at("dictionary"));
  const SurrogateResult r = bl_distance_surrogate(a, b, dict, c.at("alpha").get<double>());
  const HatFunction best = dict.member(r.argmax);
  out.results = {{"distance", r.value},
                 {"confidence_radius", r.confidence_radius},
                 {"argmax", {{"center", point_to_json(best.center)}, {"scale", best.scale}}},
                 {"truncated_fraction_a", a.truncated_fraction()},
                 {"truncated_fraction_b", b.truncated_fraction()},
                 {"dictionary_size", dict.size()}};
  CsvWriter table({"member", "center_re", "center_im", "scale", "mean_a", "mean_b", "difference"});
  for (std::size_t i = 0; i < dict.size(); ++i) {
    const HatFunction f = dict.member(i);
    const double ma = hat_mean(a, f);
    const double mb = hat_mean(b, f);
    table.row({CsvWriter::num(static_cast<long long>(i)), CsvWriter::num(f.center.re), CsvWriter::num(f.center.im),
               CsvWriter::num(f.scale), CsvWriter::num(ma), CsvWriter::num(mb), CsvWriter::num(ma - mb)});
  }
  out.artifacts.push_back({"table.csv", table.str()});
  if (a.flagged() || b.flagged()) {
    out.numerical_flag = true;
    out.flag_reason = "harmonic measure sample truncated above threshold";
  }
  return out;
}

JobOutput run_probe_regularity(const json& c) {
  JobOutput out;
  const Hull h = hull_from_json(c.at("hull"));
  const SlitDomain k = slits_from_json(c.at("slits"));
  const Point z = point_from_json(c.at("z"));
  const WalkConfig w = walk_from(c);
  const std::int64_t n = positive(c, "n");
  const bool bare = h.is_empty() && k.empty();
  CsvWriter table({"eps", "mean", "std_error", "oracle"});
  json rows = json::array();
  for (double eps : doubles(c.at("eps"), "eps")) {
    const Estimate e = regularity_probe(h, k, z, eps, n, w);
    // In H the exit abscissa is Re z + Im z * Cauchy.
    std::optional<double> oracle;
    if (bare) {
      oracle = eps > z.im ? 2.0 / std::numbers::pi * std::atan(std::sqrt(eps * eps / (z.im * z.im) - 1.0)) : 0.0;
    }
    rows.push_back({{"eps", eps}, {"estimate", estimate_json(e)}, {"oracle", oracle ? json(*oracle) : json(nullptr)}});
    table.row({CsvWriter::num(eps), CsvWriter::num(e.mean), CsvWriter::num(e.std_error),
               oracle ? CsvWriter::num(*oracle) : std::string()});
    flag_if(out, e, "regularity probe");
  }
  out.results = {{"rows", rows}};
  out.artifacts.push_back({"table.csv", table.str()});
  return out;
}

JobOutput run_probe_beurling(const json& c) {
  JobOutput out;
  const json& sj = c.at("slit");
  const SlitDomain one = slits_from_json(sj.is_array() ? sj : json::array({sj}));
  if (one.size() != 1) throw PreconditionError("job: 'slit' must describe exactly one slit");
  const Point z = point_from_json(c.at("z"));
  const WalkConfig w = walk_from(c);
  const std::int64_t n = positive(c, "n");
  CsvWriter table({"eps", "rho", "bound", "mean", "std_error", "pass"});
  json rows = json::array();
  bool all = true;
  for (double eps : doubles(c.at("eps"), "eps")) {
    const BeurlingReport r = beurling_check(one[0], z, eps, n, w);
    rows.push_back({{"eps", eps}, {"rho", r.rho}, {"bound", r.bound}, {"estimate", estimate_json(r.estimate)},
                    {"pass", r.pass}});
    table.row({CsvWriter::num(eps), CsvWriter::num(r.rho), CsvWriter::num(r.bound), CsvWriter::num(r.estimate.mean),
               CsvWriter::num(r.estimate.std_error), r.pass ? "true" : "false"});
    all = all && r.pass;
    flag_if(out, r.estimate, "beurling probe");
  }
  out.results = {{"rows", rows}, {"pass", all}};
  out.artifacts.push_back({"table.csv", table.str()});
  return out;
}

JobOutput run_probe_hitting(const json& c) {
  JobOutput out;
  const SlitDomain k = slits_from_json(c.at("slits"));
  std::vector<Point> targets;
  if (!c.at("targets").is_array()) throw PreconditionError("job: 'targets' must be an array of points");
  for (const json& t : c.at("targets")) targets.push_back(point_from_json(t));
  const HittingTable t = hitting_probe(k, targets, doubles(c.at("eps"), "eps"), positive(c, "n"), walk_from(c),
                                       c.at("starts_per_slit").get<int>());
  CsvWriter table({"eps", "target_re", "target_im", "start_re", "start_im", "mean", "std_error"});
  json maxima = json::array();
  for (std::size_t e = 0; e < t.eps.size(); ++e) {
    for (std::size_t ti = 0; ti < t.targets.size(); ++ti) {
      for (std::size_t s = 0; s < t.starts.size(); ++s) {
        const Estimate& v = t.values[e][ti * t.starts.size() + s];
        table.row({CsvWriter::num(t.eps[e]), CsvWriter::num(t.targets[ti].re), CsvWriter::num(t.targets[ti].im),
                   CsvWriter::num(t.starts[s].re), CsvWriter::num(t.starts[s].im), CsvWriter::num(v.mean),
                   CsvWriter::num(v.std_error)});
        flag_if(out, v, "hitting probe");
      }
    }
    maxima.push_back({{"eps", t.eps[e]}, {"max", estimate_json(t.column_max[e])}});
  }
  out.results = {{"column_max", maxima}, {"monotone", t.monotone}};
  out.artifacts.push_back({"table.csv", table.str()});
  return out;
}

std::string optional_num(const std::optional<double>& v) { return v ? CsvWriter::num(*v) : std::string(); }
json optional_json(const std::optional<double>& v) { return v ? json(*v) : json(nullptr); }

ExperimentBudget budget_from(const json& c) {
  ExperimentBudget b;
  b.nodes = c.at("nodes").get<int>();
  b.n_per_node = positive(c, "n_per_node");
  b.half_width = c.at("half_width").get<double>();
  b.n_per_slit = positive(c, "n_per_slit");
  b.measure_walks = positive(c, "measure_walks");
  b.vertical_y = doubles(c.at("vertical_y"), "vertical_y");
  b.vertical_walks = positive(c, "vertical_walks");
  b.kernel_resolution = c.at("kernel_resolution").get<double>();
  b.walk = walk_from(c);
  return b;
}

std::vector<int> n_list_from(const json& c) {
  std::vector<int> v;
  for (double x : doubles(c.at("n_list"), "n_list")) {
    if (x < 1.0 || x != std::floor(x)) throw PreconditionError("job: 'n_list' must hold integers >= 1");
    v.push_back(static_cast<int>(x));
  }
  return v;
}

JobOutput continuity(const json& c, const HullFamily& fam) {
  JobOutput out;
  const std::string est = c.at("estimator").get<std::string>();
  if (est != "plain" && est != "bmd") throw PreconditionError("job: 'estimator' must be plain or bmd");
  const ConvergenceReport r = continuity_experiment(fam, n_list_from(c), est == "bmd" ? EstimatorKind::kBmd
                                                                                     : EstimatorKind::kPlain,
                                                    budget_from(c));
  CsvWriter table({"n", "estimate", "stderr", "oracle", "gap", "gap_stderr", "oracle_gap", "consistent"});
  json rows = json::array();
  for (const CapacityRow& row : r.rows) {
    table.row({CsvWriter::num(row.n), CsvWriter::num(row.estimate.mean), CsvWriter::num(row.estimate.std_error),
               optional_num(row.oracle), CsvWriter::num(row.gap), CsvWriter::num(row.gap_std_error),
               optional_num(row.oracle_gap), row.consistent ? "true" : "false"});
    rows.push_back({{"n", row.n}, {"estimate", estimate_json(row.estimate)}, {"oracle", optional_json(row.oracle)},
                    {"gap", row.gap}, {"gap_std_error", row.gap_std_error},
                    {"oracle_gap", optional_json(row.oracle_gap)}, {"consistent", row.consistent}});
    flag_if(out, row.estimate, "capacity at n = " + std::to_string(row.n));
  }
  json vertical = json::array();
  for (std::size_t i = 0; i < r.vertical.size(); ++i) {
    vertical.push_back({{"y", r.vertical_y[i]}, {"estimate", estimate_json(r.vertical[i])}});
  }
  json robustness = json::array();
  for (const RobustnessCheck& k : r.robustness) {
    robustness.push_back({{"name", k.name}, {"difference", k.difference}, {"sigma", k.sigma},
                          {"allowance", k.allowance}, {"fitted_c", k.fitted_c}, {"pass", k.pass}});
  }
  out.results = {{"family", r.family},
                 {"satisfies_hypotheses", r.satisfies_hypotheses},
                 {"estimator", est},
                 {"rows", rows},
                 {"limit", estimate_json(r.limit)},
                 {"limit_oracle", optional_json(r.limit_oracle)},
                 {"kernel", {{"pass", r.kernel.pass}, {"verdict", r.kernel.verdict}, {"tested", r.kernel.tested}}},
                 {"vertical", vertical},
                 {"vertical_grows_linearly", r.vertical_grows_linearly},
                 {"robustness", robustness},
                 {"pass", r.pass},
                 {"verdict", r.verdict}};
  out.artifacts.push_back({"rows.csv", table.str()});
  return out;
}

JobOutput weak(const json& c, const HullFamily& fam) {
  JobOutput out;
  const Point z0 = c.at("z0").is_null() ? fam.z0 : point_from_json(c.at("z0"));
  const TestDictionary dict = c.at("dictionary").is_null() ? TestDictionary::for_hull(fam.envelope, 10.0)
                                                           : dictionary_from(c.at("dictionary"));
  const WeakReport r = weak_convergence_experiment(fam, z0, n_list_from(c), dict, budget_from(c));
  CsvWriter table({"n", "distance", "confidence_radius", "functional_gap", "functional_gap_stderr", "oracle_gap"});
  json rows = json::array();
  for (const WeakRow& row : r.rows) {
    table.row({CsvWriter::num(row.n), CsvWriter::num(row.distance.value),
               CsvWriter::num(row.distance.confidence_radius), CsvWriter::num(row.functional_gap),
               CsvWriter::num(row.functional_gap_std_error), optional_num(row.oracle_gap)});
    rows.push_back({{"n", row.n}, {"distance", row.distance.value},
                    {"confidence_radius", row.distance.confidence_radius}, {"functional_gap", row.functional_gap},
                    {"functional_gap_std_error", row.functional_gap_std_error},
                    {"oracle_gap", optional_json(row.oracle_gap)}});
  }
  out.results = {{"family", r.family},
                 {"z0", point_to_json(r.z0)},
                 {"rows", rows},
                 {"control", {{"distance", r.control.value}, {"confidence_radius", r.control.confidence_radius}}},
                 {"nonincreasing", r.nonincreasing},
                 {"halved", r.halved},
                 {"control_below_last", r.control_below_last},
                 {"functional_gaps_consistent", r.functional_gaps_consistent},
                 {"pass", r.pass},
                 {"verdict", r.verdict}};
  out.artifacts.push_back({"rows.csv", table.str()});
  return out;
}

JobOutput monotone(const json& c, const HullFamily& fam) {
  JobOutput out;
  const MonotoneLimit r = monotone_limit(fam, c.at("resolution").get<double>(), c.at("n_max").get<int>());
  CsvWriter table({"index"});
  for (int m : r.tested) table.row({CsvWriter::num(m)});
  const double tolerance = 2.0 * r.mask.resolution();
  out.results = {{"family", fam.name},
                 {"kind", r.kind == Monotonicity::kDecreasing ? "decreasing" : "increasing"},
                 {"tested", r.tested},
                 {"cells", r.mask.count()},
                 {"filled_cells", r.filled_cells},
                 {"resolution", r.mask.resolution()},
                 {"hausdorff_to_limit", r.hausdorff_to_limit},
                 {"pass", r.hausdorff_to_limit <= tolerance}};
  out.artifacts.push_back({"rows.csv", table.str()});
  return out;
}

JobOutput run_experiment(const json& c) {
  const std::string kind = c.at("kind").get<std::string>();
  static const std::map<std::string, std::string> default_family{
      {"continuity", "a"}, {"weak", "a"}, {"counterexample", "e"}, {"monotone", "a"}};
  const auto it = default_family.find(kind);
  if (it == default_family.end()) {
    throw PreconditionError("job: unknown experiment kind '" + kind + "' (known: continuity weak counterexample monotone)");
  }
  const HullFamily fam = builtin_family(c.at("family").is_null() ? it->second : c.at("family").get<std::string>());
  if (kind == "weak") return weak(c, fam);
  if (kind == "monotone") return monotone(c, fam);
  if (kind == "counterexample" && fam.satisfies_hypotheses) {
    throw PreconditionError("job: counterexample needs a family that violates the hypotheses (e)");
  }
  return continuity(c, fam);
}

}  // namespace

std::vector<std::string> job_commands() {
  std::vector<std::string> names;
  for (const auto& [name, s] : schemas()) names.push_back(name);
  return names;
}

json resolve_job(const std::string& command, const json& file, const json& overrides) {
  const auto it = schemas().find(command);
  if (it == schemas().end()) throw PreconditionError("job: unknown command '" + command + "'");
  const Schema& schema = it->second;
  json config = schema.defaults;
  apply_layer(config, file, schema.defaults, "");
  apply_layer(config, nest_overrides(overrides), schema.defaults, "");
  if (config.at("version") != 1) throw PreconditionError("job: unsupported version (expected 1)");
  if (config.at("command") != command) {
    throw PreconditionError("job: file is for command '" + config.at("command").get<std::string>() + "', not '" +
                            command + "'");
  }
  for (const std::string& key : schema.required) {
    if (config.at(key).is_null()) throw PreconditionError("job: missing required key '" + key + "'");
  }
  const json& seed = config.at("seed");
  if (!seed.is_number_unsigned() && !(seed.is_number_integer() && seed.get<std::int64_t>() >= 0)) {
    throw PreconditionError("job: 'seed' must be a non-negative integer");
  }
  if (!config.at("out").is_string()) throw PreconditionError("job: 'out' must be a string");
  return config;
}

std::uint64_t config_hash(const json& config) {
  json hashed = config;
  hashed.erase("out");
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char ch : hashed.dump()) {
    h ^= ch;
    h *= 0x100000001b3ULL;
  }
  return h;
}

JobOutput run_job(const json& config) {
  const std::string command = config.at("command").get<std::string>();
  if (command == "validate") return run_validate(config);
  if (command == "hcap") return run_hcap(config);
  if (command == "bmd-hcap") return run_bmd_hcap(config);
  if (command == "hm-sample") return run_hm_sample(config);
  if (command == "hm-distance") return run_hm_distance(config);
  if (command == "probe-regularity") return run_probe_regularity(config);
  if (command == "probe-beurling") return run_probe_beurling(config);
  if (command == "probe-hitting") return run_probe_hitting(config);
  if (command == "experiment") return run_experiment(config);
  throw PreconditionError("job: unknown command '" + command + "'");
}

json make_summary(const json& config, const JobOutput& out, double wall_seconds) {
  char hash[17];
  std::snprintf(hash, sizeof hash, "%016llx", static_cast<unsigned long long>(config_hash(config)));
  json artifacts = json::array();
  for (const Artifact& a : out.artifacts) artifacts.push_back(a.file);
  json s = {{"command", config.at("command")},
            {"config", config},
            {"config_hash", hash},
            {"seed", config.at("seed")},
            {"wall_time_seconds", wall_seconds},
            {"results", out.results},
            {"artifacts", artifacts},
            {"numerical_flag", out.numerical_flag}};
  if (out.numerical_flag) s["flag_reason"] = out.flag_reason;
  return s;
}

}  // namespace hcap::cli
