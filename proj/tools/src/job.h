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


// Job files for hcapctl: schema, defaults, override rules and dispatch.
//
// A job is a flat JSON object. Every command has a fixed key set with
// defaults; unknown keys are rejected and "seed" is mandatory. Nested
// objects (hulls, slits, points) use the hull_json formats.

#pragma once

#include <cstdint>
#include <json.hpp>
#include <string>
#include <vector>

namespace hcap::cli {

using nlohmann::json;

struct Artifact {
  std::string file;
  std::string contents;
};

struct JobOutput {
  json results;
  std::vector<Artifact> artifacts;
  /// Truncation above threshold or another numerical red flag.
  bool numerical_flag = false;
  std::string flag_reason;
  /// The job ran but its input failed validation (validate command).
  bool invalid = false;
};

/// Command names accepted by resolve_job and run_job.
std::vector<std::string> job_commands();

/// Defaults, then file keys, then overrides. Throws PreconditionError on an
/// unknown command or key, a missing required key, or a missing seed.
json resolve_job(const std::string& command, const json& file, const json& overrides);

/// FNV-1a of the canonical dump of a resolved config.
std::uint64_t config_hash(const json& config);

/// Runs a resolved job. PreconditionError and NumericalError propagate.
JobOutput run_job(const json& config);

/// summary.json contents: sorted keys, resolved config, hash, seed, wall time.
json make_summary(const json& config, const JobOutput& out, double wall_seconds);

}  // namespace hcap::cli
