// Copyright 2026 The superloc Authors
// SPDX-License-Identifier: Apache-2.0

#include <benchmark/benchmark.h>

#include <bit>
#include <random>

#include "superloc/grassmann.hpp"

namespace {

using superloc::Complex;
using superloc::GrassmannMatrix;
using superloc::GrassmannValue;
using superloc::MultiIndex;

// Dense element: every monomial of the given parity gets a coefficient.
GrassmannValue dense(int gens, bool even_only, std::mt19937& rng) {
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  GrassmannValue v(gens);
  for (std::uint64_t bits = 0; bits < (std::uint64_t{1} << gens); ++bits) {
    if (even_only && (std::popcount(bits) & 1)) continue;
    v.accumulate(MultiIndex::from_bits(bits), Complex(u(rng), u(rng)));
  }
  return v;
}

void BM_GrassmannMul(benchmark::State& state) {
  const int gens = static_cast<int>(state.range(0));
  std::mt19937 rng(1);
  const auto a = dense(gens, false, rng);
  const auto b = dense(gens, false, rng);
  for (auto _ : state) benchmark::DoNotOptimize(superloc::gr_mul(a, b));
}
BENCHMARK(BM_GrassmannMul)->DenseRange(2, 10, 2);

void BM_GrassmannInverse(benchmark::State& state) {
  const int gens = static_cast<int>(state.range(0));
  std::mt19937 rng(2);
  auto a = dense(gens, true, rng);
  a.accumulate(MultiIndex{}, 4.0);
  for (auto _ : state) benchmark::DoNotOptimize(superloc::gr_inverse(a));
}
BENCHMARK(BM_GrassmannInverse)->DenseRange(2, 8, 2);

void BM_EvenDeterminant(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  const int gens = 4;
  std::mt19937 rng(3);
  GrassmannMatrix m(n, n, gens);
  for (int r = 0; r < n; ++r)
    for (int c = 0; c < n; ++c) m.at(r, c) = dense(gens, true, rng);
  for (auto _ : state) benchmark::DoNotOptimize(superloc::even_det(m));
}
BENCHMARK(BM_EvenDeterminant)->DenseRange(2, 8, 2);

}  // namespace
