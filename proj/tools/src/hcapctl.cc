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


// hcapctl: batch front end for the hcap library.
//
//   hcapctl [--workers N] <command> [--job FILE] [--seed S] [--out DIR]
//           [--hull JSON] [--slits JSON] [--family NAME] [--set KEY=VALUE]...
//   hcapctl experiment <continuity|weak|counterexample|monotone> ...
//   hcapctl run FILE ...
//
// Flags override job file values. Exit status: 0 success, 1 validation or
// precondition failure, 2 numerical failure (summary.json is still written).

#include <CLI11.hpp>
#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "hcap/errors.h"
#include "hcap/parallel.h"
#include "job.h"

namespace {

using hcap::cli::json;

struct Options {
  std::string job_file;
  std::optional<std::uint64_t> seed;
  std::optional<std::string> out;
  std::optional<std::string> hull;
  std::optional<std::string> slits;
  std::optional<std::string> family;
  std::vector<std::string> sets;
  std::string kind;
};

json parse_json(const std::string& text, const std::string& what) {
  try {
    return json::parse(text);
  } catch (const json::parse_error& e) {
    throw hcap::PreconditionError(what + ": " + e.what());
  }
}

json read_job_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw hcap::PreconditionError("cannot read job file '" + path + "'");
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_json(ss.str(), "job file '" + path + "'");
}

json overrides_from(const Options& o) {
  json ov = json::object();
  if (o.seed) ov["seed"] = *o.seed;
  if (o.out) ov["out"] = *o.out;
  if (o.hull) ov["hull"] = parse_json(*o.hull, "--hull");
  if (o.slits) ov["slits"] = parse_json(*o.slits, "--slits");
  if (o.family) ov["family"] = *o.family;
  if (!o.kind.empty()) ov["kind"] = o.kind;
  for (const std::string& s : o.sets) {
    const std::size_t eq = s.find('=');
    if (eq == std::string::npos || eq == 0) throw hcap::PreconditionError("--set expects KEY=VALUE, got '" + s + "'");
    const std::string value = s.substr(eq + 1);
    // Bare words are strings; anything that parses as JSON is taken as JSON.
    json v = json::parse(value, nullptr, false);
    ov[s.substr(0, eq)] = v.is_discarded() ? json(value) : v;
  }
  return ov;
}

void write_file(const std::filesystem::path& p, const std::string& contents) {
  std::ofstream f(p, std::ios::binary);
  f << contents;
  if (!f) throw hcap::PreconditionError("cannot write '" + p.string() + "'");
}

int execute(const std::string& command, const Options& o) {
  json config;
  try {
    const json file = o.job_file.empty() ? json::object() : read_job_file(o.job_file);
    std::string cmd = command;
    if (cmd.empty()) {
      if (!file.is_object() || !file.contains("command") || !file.at("command").is_string()) {
        throw hcap::PreconditionError("job file needs a \"command\" string for hcapctl run");
      }
      cmd = file.at("command").get<std::string>();
    }
    config = hcap::cli::resolve_job(cmd, file, overrides_from(o));
  } catch (const hcap::PreconditionError& e) {
    std::fprintf(stderr, "hcapctl: %s\n", e.what());
    return 1;
  }

  const std::filesystem::path dir = config.at("out").get<std::string>();
  const auto t0 = std::chrono::steady_clock::now();
  hcap::cli::JobOutput out;
  std::string numerical_error;
  try {
    out = hcap::cli::run_job(config);
  } catch (const hcap::PreconditionError& e) {
    std::fprintf(stderr, "hcapctl: %s\n", e.what());
    return 1;
  } catch (const hcap::NumericalError& e) {
    numerical_error = e.what();
  }
  const double wall = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();

  json summary = hcap::cli::make_summary(config, out, wall);
  if (!numerical_error.empty()) summary["error"] = numerical_error;
  try {
    std::filesystem::create_directories(dir);
    for (const hcap::cli::Artifact& a : out.artifacts) write_file(dir / a.file, a.contents);
    write_file(dir / "summary.json", summary.dump(2) + "\n");
  } catch (const std::exception& e) {
    std::fprintf(stderr, "hcapctl: %s\n", e.what());
    return 1;
  }

  if (!numerical_error.empty()) {
    std::fprintf(stderr, "hcapctl: numerical failure: %s\n", numerical_error.c_str());
    return 2;
  }
  if (out.numerical_flag) {
    std::fprintf(stderr, "hcapctl: numerical flag: %s\n", out.flag_reason.c_str());
    return 2;
  }
  if (out.invalid) {
    std::fprintf(stderr, "hcapctl: validation failed (see %s)\n", (dir / "summary.json").string().c_str());
    return 1;
  }
  std::printf("%s\n", (dir / "summary.json").string().c_str());
  return 0;
}

void add_common(CLI::App* sub, Options& o) {
  sub->add_option("--job", o.job_file, "JSON job file")->check(CLI::ExistingFile);
  sub->add_option("--seed", o.seed, "Master seed (overrides the file)");
  sub->add_option("--out", o.out, "Output directory");
  sub->add_option("--hull", o.hull, "Hull as JSON");
  sub->add_option("--slits", o.slits, "Slit domain as a JSON array");
  sub->add_option("--family", o.family, "Built-in hull family (experiment)");
  sub->add_option("--set", o.sets, "Override KEY=VALUE; nested keys use dots (walk.eps_absorb=1e-5)");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Half-plane capacity estimation by walk-on-spheres"};
  app.require_subcommand(1);
  std::optional<int> workers;
  app.add_option("--workers", workers, "Worker threads (default $HCAP_WORKERS, then hardware)");

  Options opts;
  const std::map<std::string, std::string> commands{
      {"validate", "Certify hull axioms and slit placement on a grid"},
      {"hcap", "Half-plane capacity by line quadrature"},
      {"bmd-hcap", "BMD half-plane capacity in a parallel slit half-plane"},
      {"hm-sample", "Sample exit points of the walk (exits.csv)"},
      {"hm-distance", "Dictionary surrogate of the BL distance between two harmonic measures"},
      {"probe-regularity", "Harmonic measure of small balls around a point"},
      {"probe-beurling", "Slit hitting probability against the projection bound"},
      {"probe-hitting", "Hitting probabilities of shrinking balls from slit points"},
  };
  std::string chosen;
  for (const auto& [name, help] : commands) {
    CLI::App* sub = app.add_subcommand(name, help);
    add_common(sub, opts);
    sub->callback([&chosen, name = name] { chosen = name; });
  }
  CLI::App* exp = app.add_subcommand("experiment", "Convergence experiments on built-in families");
  exp->add_option("kind", opts.kind, "continuity, weak, counterexample or monotone")->required();
  add_common(exp, opts);
  exp->callback([&chosen] { chosen = "experiment"; });

  CLI::App* run = app.add_subcommand("run", "Run a job file, taking the command from its \"command\" key");
  run->add_option("job", opts.job_file, "JSON job file")->required()->check(CLI::ExistingFile);
  run->add_option("--seed", opts.seed, "Master seed (overrides the file)");
  run->add_option("--out", opts.out, "Output directory");
  run->add_option("--set", opts.sets, "Override KEY=VALUE");
  bool from_file = false;
  run->callback([&from_file] { from_file = true; });

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? 0 : 1;
  }
  if (workers) hcap::set_workers(*workers);
  return execute(from_file ? std::string() : chosen, opts);
}
