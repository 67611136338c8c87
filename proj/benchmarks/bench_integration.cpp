// Copyright 2026 The superloc Authors
// SPDX-License-Identifier: Apache-2.0

#include <benchmark/benchmark.h>

#include <cmath>

#include "superloc/berezin.hpp"
#include "superloc/residue.hpp"
#include "superloc/scenario.hpp"

namespace {

using namespace superloc;

Scenario fixture(const char* name) {
  return load_scenario(std::string(SUPERLOC_FIXTURE_DIR) + "/" + name + ".json");
}

void BM_HalfLine(benchmark::State& state) {
  QuadratureSpec q;
  q.panels = 2;
  q.nodes = static_cast<int>(state.range(0));
  q.tol = 1e-12;
  q.map_power = 3.0;
  for (auto _ : state) {
    benchmark::DoNotOptimize(
        integrate_half_line([](double r) { return Complex(2.0 * r / std::pow(1.0 + r * r, 2)); }, q));
  }
}
BENCHMARK(BM_HalfLine)->Arg(8)->Arg(16)->Arg(32)->Unit(benchmark::kMicrosecond);

void BM_ChartIntegralP11(benchmark::State& state) {
  const auto s = fixture("p1-1");
  for (auto _ : state) benchmark::DoNotOptimize(integrate_chart(s.form, s.quad));
}
BENCHMARK(BM_ChartIntegralP11)->Unit(benchmark::kMillisecond);

void BM_ChartIntegralP22(benchmark::State& state) {
  const auto s = fixture("p2-2");
  for (auto _ : state) benchmark::DoNotOptimize(integrate_chart(s.form, s.quad));
}
BENCHMARK(BM_ChartIntegralP22)->Unit(benchmark::kMillisecond)->Iterations(1);

void BM_ResidueSimple(benchmark::State& state) {
  const auto s = fixture("p1-1");
  for (auto _ : state) {
    benchmark::DoNotOptimize(residue_simple(s.field, s.form, s.points[0], HypothesisMode::kStrict));
  }
}
BENCHMARK(BM_ResidueSimple)->Unit(benchmark::kMicrosecond);

void BM_ResidueGeneral(benchmark::State& state) {
  const auto s = fixture("p2-2");
  for (auto _ : state) {
    benchmark::DoNotOptimize(residue_general(s.field, s.form, s.points[0], *s.decompositions[0]));
  }
}
BENCHMARK(BM_ResidueGeneral)->Unit(benchmark::kMicrosecond);

}  // namespace
