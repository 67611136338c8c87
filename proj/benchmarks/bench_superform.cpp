// Copyright 2026 The superloc Authors
// SPDX-License-Identifier: Apache-2.0

#include <benchmark/benchmark.h>

#include "superloc/identities.hpp"
#include "superloc/superform.hpp"

namespace {

using namespace superloc;

// omega = dbar of the localizing one-form sum dz_i conj(g_i) + dxi_i conj(g_i).
SuperForm localizing_two_form(int n) {
  return dbar(localizing_form(random_linear_g(n, 11)));
}

void BM_WedgePower(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  const SuperForm w = localizing_two_form(n);
  for (auto _ : state) {
    SuperForm acc = SuperForm::function(SuperFunction::body(n, n, BodyExpr(1.0)));
    for (int k = 0; k < n + 1; ++k) acc = wedge(acc, w);
    benchmark::DoNotOptimize(acc);
  }
}
BENCHMARK(BM_WedgePower)->DenseRange(1, 3)->Unit(benchmark::kMicrosecond);

void BM_Dbar(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  const SuperForm a = random_form(n, n, 5, 6);
  for (auto _ : state) benchmark::DoNotOptimize(dbar(a));
}
BENCHMARK(BM_Dbar)->DenseRange(1, 3)->Unit(benchmark::kMicrosecond);

void BM_FormExp(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  const auto g = random_linear_g(n, 13);
  const SuperVectorField v = random_theorem_field(g, 17);
  const SuperForm w = localizing_form(g);
  const SuperForm tilde = (dbar(w) + contract(v, w)).scaled(BodyExpr(-1.0));
  const auto caps = DegreeCaps::for_chart(n, n);
  for (auto _ : state) benchmark::DoNotOptimize(form_exp_truncated(tilde, caps));
}
BENCHMARK(BM_FormExp)->DenseRange(1, 3)->Unit(benchmark::kMicrosecond);

}  // namespace
