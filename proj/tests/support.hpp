// Copyright 2026 The superloc Authors
// SPDX-License-Identifier: Apache-2.0

// Shared helpers for the test binaries: fixture paths, a seeded generator
// and small brute-force oracles that do not reuse library code paths.

#pragma once

#include <algorithm>
#include <complex>
#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include "superloc/grassmann.hpp"
#include "superloc/superfun.hpp"

#ifndef SUPERLOC_FIXTURE_DIR
#error "SUPERLOC_FIXTURE_DIR must be defined by the build"
#endif

namespace superloc::test {

inline std::string fixture(const std::string& name) { return std::string(SUPERLOC_FIXTURE_DIR) + "/" + name; }

class Gen {
 public:
  explicit Gen(std::uint64_t seed) : rng_(seed) {}

  int integer(int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(rng_); }
  double real(double lo, double hi) { return std::uniform_real_distribution<double>(lo, hi)(rng_); }
  bool coin() { return integer(0, 1) == 1; }
  Complex complex(double r = 1.0) { return {real(-r, r), real(-r, r)}; }
  /// Small Gaussian integer, never zero.
  Complex gaussian_int(int r = 3) {
    for (;;) {
      Complex c(integer(-r, r), integer(-r, r));
      if (c != Complex{}) return c;
    }
  }
  std::uint64_t bits(int count) {
    return count == 0 ? 0 : std::uniform_int_distribution<std::uint64_t>(0, (std::uint64_t{1} << count) - 1)(rng_);
  }
  std::mt19937_64& engine() { return rng_; }

 private:
  std::mt19937_64 rng_;
};

enum class Want { kAny, kEven, kOdd };

/// Random element with up to `terms` monomials and Gaussian-integer
/// coefficients (products stay exact in double precision).
inline GrassmannValue random_grassmann(Gen& g, int gens, int terms, Want want = Want::kAny) {
  GrassmannValue v(gens);
  if (gens == 0 && want == Want::kOdd) return v;
  for (int t = 0; t < terms; ++t) {
    MultiIndex idx = MultiIndex::from_bits(g.bits(gens));
    if (want == Want::kEven && idx.is_odd()) idx = idx.contains(1) ? idx.without(1) : idx.with(1);
    if (want == Want::kOdd && !idx.is_odd()) idx = idx.contains(1) ? idx.without(1) : idx.with(1);
    v.accumulate(idx, g.gaussian_int());
  }
  return v;
}

/// Sign of the word a followed by b after bubble-sorting into increasing
/// order, or 0 if a label repeats. Independent of the bit-mask path.
inline int bubble_sign(std::vector<int> word) {
  int sign = 1;
  for (std::size_t i = 0; i < word.size(); ++i) {
    for (std::size_t j = 0; j + 1 < word.size() - i; ++j) {
      if (word[j] == word[j + 1]) return 0;
      if (word[j] > word[j + 1]) {
        std::swap(word[j], word[j + 1]);
        sign = -sign;
      }
    }
  }
  for (std::size_t i = 1; i < word.size(); ++i) {
    if (word[i] == word[i - 1]) return 0;
  }
  return sign;
}

/// Term-by-term product using bubble_sign on label words.
inline GrassmannValue brute_product(const GrassmannValue& a, const GrassmannValue& b) {
  GrassmannValue out(a.gens());
  for (const auto& [ia, ca] : a.terms()) {
    for (const auto& [ib, cb] : b.terms()) {
      std::vector<int> word = ia.labels();
      const auto lb = ib.labels();
      word.insert(word.end(), lb.begin(), lb.end());
      const int s = bubble_sign(word);
      if (s == 0) continue;
      out.accumulate(MultiIndex::from_bits(ia.bits() | ib.bits()), ca * cb * static_cast<double>(s));
    }
  }
  return out;
}

/// Cofactor expansion along the first row; entries must be even.
inline GrassmannValue laplace_det(const std::vector<std::vector<GrassmannValue>>& m, int gens) {
  const std::size_t n = m.size();
  if (n == 0) return GrassmannValue::scalar(gens, 1.0);
  if (n == 1) return m[0][0];
  GrassmannValue acc(gens);
  for (std::size_t c = 0; c < n; ++c) {
    if (m[0][c].is_zero()) continue;
    std::vector<std::vector<GrassmannValue>> minor;
    for (std::size_t r = 1; r < n; ++r) {
      std::vector<GrassmannValue> row;
      for (std::size_t k = 0; k < n; ++k) {
        if (k != c) row.push_back(m[r][k]);
      }
      minor.push_back(row);
    }
    GrassmannValue term = m[0][c] * laplace_det(minor, gens);
    acc += (c % 2 == 0) ? term : -term;
  }
  return acc;
}

/// Random rational expression in z_1..z_m, zbar_1..zbar_m. Denominators are
/// 2 + |u|^2 for a random subexpression u, so evaluation never divides by zero.
inline BodyExpr random_expr(Gen& g, int m, int depth) {
  const int pick = depth <= 0 ? g.integer(0, 1) : g.integer(0, 7);
  switch (pick) {
    case 0:
      return BodyExpr(Complex(g.integer(-3, 3), g.integer(-2, 2)) * 0.5);
    case 1:
      return BodyExpr::var(g.integer(1, m), g.coin());
    case 2:
    case 3:
      return random_expr(g, m, depth - 1) + random_expr(g, m, depth - 1);
    case 4:
    case 5:
      return random_expr(g, m, depth - 1) * random_expr(g, m, depth - 1);
    case 6: {
      const BodyExpr u = random_expr(g, m, depth - 1);
      return random_expr(g, m, depth - 1) / (BodyExpr(2.0) + u * u.conj());
    }
    default:
      return BodyExpr::power(random_expr(g, m, depth - 1), g.integer(0, 3));
  }
}

/// Random superfunction with `terms` monomials and random coefficients.
inline SuperFunction random_superfunction(Gen& g, int m, int n, int terms, int depth = 2) {
  SuperFunction f(m, n);
  for (int t = 0; t < terms; ++t) {
    f.add_term(MultiIndex::from_bits(g.bits(n)), MultiIndex::from_bits(g.bits(n)), random_expr(g, m, depth));
  }
  return f;
}

/// Random homogeneous superfunction (odd monomials only when `odd`).
inline SuperFunction random_homogeneous(Gen& g, int m, int n, int terms, bool odd, int depth = 2) {
  SuperFunction f(m, n);
  for (int t = 0; t < terms; ++t) {
    OddKey k{MultiIndex::from_bits(g.bits(n)), MultiIndex::from_bits(g.bits(n))};
    if (k.is_odd() != odd) k.xi = k.xi.contains(1) ? k.xi.without(1) : k.xi.with(1);
    f.add_term(k.xi, k.xibar, random_expr(g, m, depth));
  }
  return f;
}

inline std::vector<Complex> random_point(Gen& g, int m, double r = 1.0) {
  std::vector<Complex> z;
  for (int i = 0; i < m; ++i) z.push_back(g.complex(r));
  return z;
}

inline bool near(Complex a, Complex b, double tol) { return std::abs(a - b) <= tol; }

}  // namespace superloc::test
