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


#include <benchmark/benchmark.h>

#include "hcap/bmd.h"
#include "hcap/geometry.h"
#include "hcap/hcap.h"
#include "hcap/sampler.h"

namespace hcap {
namespace {

void BM_WosExitEmpty(benchmark::State& state) {
  const Domain d;
  const WalkConfig cfg;
  Rng rng(1, 0, 0);
  for (auto _ : state) benchmark::DoNotOptimize(wos_exit({0.0, 1.0}, d, cfg, rng));
}
BENCHMARK(BM_WosExitEmpty);

void BM_WosExitSlit(benchmark::State& state) {
  const Domain d{.hull = Hull::vertical_slit(0.0, 1.0)};
  const WalkConfig cfg;
  Rng rng(1, 0, 0);
  for (auto _ : state) benchmark::DoNotOptimize(wos_exit({0.5, 1.5}, d, cfg, rng));
}
BENCHMARK(BM_WosExitSlit);

void BM_WosExitSlitDomain(benchmark::State& state) {
  const Domain d{.hull = Hull::vertical_slit(0.0, 1.0),
                 .slits = SlitDomain({{1.0, 2.0, 3.0}, {2.0, -3.0, -1.0}})};
  const WalkConfig cfg;
  Rng rng(1, 0, 0);
  for (auto _ : state) benchmark::DoNotOptimize(wos_exit({0.5, 1.5}, d, cfg, rng));
}
BENCHMARK(BM_WosExitSlitDomain);

void BM_RidgeDistance(benchmark::State& state) {
  const Hull h = state.range(0) == 0 ? Hull::ridge(RidgeProfile::lorentzian(0.3, 0.0, 1.0))
                                     : Hull::ridge(RidgeProfile::gaussian(1.0, 0.0, 0.5));
  Rng rng(2, 0, 0);
  for (auto _ : state) {
    const Point z{8.0 * rng.uniform() - 4.0, 0.05 + 2.0 * rng.uniform()};
    benchmark::DoNotOptimize(dist_to_hull(h, z));
  }
}
BENCHMARK(BM_RidgeDistance)->Arg(0)->Arg(1);

void BM_HcapIntegralSlit(benchmark::State& state) {
  HcapJob job;
  job.hull = Hull::vertical_slit(0.0, 1.0);
  job.nodes = 16;
  job.n_per_node = state.range(0);
  job.validate = false;
  for (auto _ : state) benchmark::DoNotOptimize(hcap_integral(job).estimate.mean);
  state.SetItemsProcessed(state.iterations() * job.nodes * job.n_per_node);
}
BENCHMARK(BM_HcapIntegralSlit)->Arg(500)->Arg(2000)->Unit(benchmark::kMillisecond);

void BM_EstimateChain(benchmark::State& state) {
  ChainSetup s;
  s.slits = SlitDomain({{1.0, 2.0, 3.0}});
  s.f_tilde = Hull::vertical_slit(0.0, 1.0);
  s.margins = {0.3};
  WalkConfig cfg;
  for (auto _ : state) benchmark::DoNotOptimize(estimate_chain(s, s.f_tilde, 5000, cfg).spectral_radius);
}
BENCHMARK(BM_EstimateChain)->Unit(benchmark::kMillisecond);

}  // namespace
}  // namespace hcap

BENCHMARK_MAIN();
