// Copyright (c) 2026 hmf project contributors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include <benchmark/benchmark.h>

#include "hmf/quadfield.hpp"

namespace {

void BM_FactorElement(benchmark::State& state) {
  hmf::QuadElem w = hmf::QuadElem::omega(5);
  hmf::QuadElem v = hmf::QuadElem::integer(2310, 5) * w.pow(5);
  for (auto _ : state) {
    benchmark::DoNotOptimize(hmf::factor_element(v));
  }
}
BENCHMARK(BM_FactorElement);

void BM_TotallyPositiveIndices(benchmark::State& state) {
  for (auto _ : state) {
    benchmark::DoNotOptimize(hmf::totally_positive_indices(5, state.range(0)));
  }
}
BENCHMARK(BM_TotallyPositiveIndices)->Arg(30)->Arg(100);

}  // namespace

BENCHMARK_MAIN();
