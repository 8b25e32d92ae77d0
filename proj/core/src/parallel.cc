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
#include "hcap/parallel.h"

#include <cstdlib>
#include <string>

namespace hcap {
namespace {

int initial_workers() {
  if (const char* env = std::getenv("HCAP_WORKERS")) {
    try {
      const int n = std::stoi(env);
      if (n > 0) return n;
    } catch (...) {
    }
  }
  return std::max(1u, std::thread::hardware_concurrency());
}

std::atomic<int>& worker_count() {
  static std::atomic<int> n{initial_workers()};
  return n;
}

}  // namespace

int workers() { return worker_count().load(); }

void set_workers(int n) { worker_count().store(std::max(1, n)); }

}  // namespace hcap
