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
// Counter-style substreams for reproducible parallel sampling. A chunk's
// generator depends only on (seed, stream, chunk), so results never depend
// on which worker ran the chunk.

#pragma once

#include <cstdint>
#include <random>
#include <string_view>

namespace hcap {

std::uint64_t splitmix64(std::uint64_t x);

/// FNV-1a of a label mixed with an index; names a logical stream
/// ("hcap-node" #17, "nu-slit" #2, ...).
std::uint64_t stream_id(std::string_view label, std::uint64_t index = 0);

std::uint64_t substream_seed(std::uint64_t seed, std::uint64_t stream, std::uint64_t chunk);

class Rng {
 public:
  explicit Rng(std::uint64_t seed) : gen_(seed) {}
  Rng(std::uint64_t seed, std::uint64_t stream, std::uint64_t chunk)
      : gen_(substream_seed(seed, stream, chunk)) {}

  /// Uniform on [0, 1) with 53 random bits.
  double uniform() { return static_cast<double>(gen_() >> 11) * 0x1.0p-53; }
  std::uint64_t bits() { return gen_(); }

 private:
  std::mt19937_64 gen_;
};

}  // namespace hcap
