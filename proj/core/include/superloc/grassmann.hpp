// Copyright 2026 The superloc Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <compare>
#include <complex>
#include <cstdint>
#include <map>
#include <span>
#include <string>
#include <vector>

#include "superloc/tau_scalar.hpp"

namespace superloc {

enum class Parity { kEven, kOdd, kMixed };

const char* to_string(Parity p);

/// Strictly increasing set of generator labels 1..L, stored as a bit mask
/// (bit k-1 set <=> label k present). Supports up to 64 generators.
class MultiIndex {
 public:
  static constexpr int kMaxGenerators = 64;

  constexpr MultiIndex() = default;
  static constexpr MultiIndex from_bits(std::uint64_t bits) { return MultiIndex(bits); }

  /// Validates that `labels` is strictly increasing and within 1..gens.
  static MultiIndex from_labels(std::span<const int> labels, int gens);
  static MultiIndex from_labels(std::initializer_list<int> labels, int gens) {
    return from_labels(std::span<const int>(labels.begin(), labels.size()), gens);
  }
  /// All labels 1..count.
  static MultiIndex full(int count);

  std::uint64_t bits() const { return bits_; }
  int size() const;
  bool empty() const { return bits_ == 0; }
  bool is_odd() const { return (size() & 1) != 0; }
  bool contains(int label) const { return (bits_ >> (label - 1)) & 1U; }
  /// 1-based position of `label` in the increasing sequence; 0 if absent.
  int position(int label) const;
  /// Largest label, 0 when empty.
  int max_label() const;
  MultiIndex without(int label) const { return MultiIndex(bits_ & ~(std::uint64_t{1} << (label - 1))); }
  MultiIndex with(int label) const { return MultiIndex(bits_ | (std::uint64_t{1} << (label - 1))); }
  std::vector<int> labels() const;

  /// Ordered by length first, then lexicographically on the label sequence.
  std::strong_ordering operator<=>(const MultiIndex& other) const;
  bool operator==(const MultiIndex& other) const = default;

 private:
  explicit constexpr MultiIndex(std::uint64_t bits) : bits_(bits) {}
  std::uint64_t bits_ = 0;
};

/// Sign of beta_a * beta_b after sorting into canonical order: 0 if the
/// monomials share a generator, otherwise (-1)^(number of inversions).
int monomial_product_sign(std::uint64_t a, std::uint64_t b);

/// Element of the complex Grassmann algebra with `gens` generators, kept in
/// sparse canonical form (no stored zero coefficients).
class GrassmannValue {
 public:
  using Terms = std::map<MultiIndex, Complex>;

  explicit GrassmannValue(int gens = 0);
  static GrassmannValue scalar(int gens, Complex c);
  static GrassmannValue generator(int gens, int label, Complex c = 1.0);
  static GrassmannValue monomial(int gens, MultiIndex idx, Complex c = 1.0);

  int gens() const { return gens_; }
  const Terms& terms() const { return terms_; }
  bool is_zero() const { return terms_.empty(); }
  Complex coefficient(const MultiIndex& idx) const;

  Complex body() const { return coefficient(MultiIndex{}); }
  GrassmannValue soul() const;
  Parity parity() const;

  /// Adds c to the coefficient of idx, pruning exact zeros.
  void accumulate(const MultiIndex& idx, Complex c);

  GrassmannValue& operator+=(const GrassmannValue& other);
  GrassmannValue& operator-=(const GrassmannValue& other);
  GrassmannValue& operator*=(Complex c);

  friend GrassmannValue operator+(GrassmannValue a, const GrassmannValue& b) { return a += b; }
  friend GrassmannValue operator-(GrassmannValue a, const GrassmannValue& b) { return a -= b; }
  friend GrassmannValue operator-(GrassmannValue a) { return a *= -1.0; }
  friend GrassmannValue operator*(GrassmannValue a, Complex c) { return a *= c; }
  friend GrassmannValue operator*(Complex c, GrassmannValue a) { return a *= c; }
  friend GrassmannValue operator*(const GrassmannValue& a, const GrassmannValue& b);

  bool operator==(const GrassmannValue& other) const = default;

  std::string to_string() const;

 private:
  int gens_;
  Terms terms_;
};

/// Bilinear product with anticommuting generators.
GrassmannValue gr_mul(const GrassmannValue& a, const GrassmannValue& b);
/// Inverse of an even element with non-zero body.
GrassmannValue gr_inverse(const GrassmannValue& a);
/// exp(body) * sum_k soul^k / k!, terminating once soul^k vanishes.
GrassmannValue gr_exp(const GrassmannValue& a);
/// a^k for k >= 0.
GrassmannValue gr_pow(const GrassmannValue& a, int k);

/// Largest coefficient-wise |a - b|.
double max_abs_diff(const GrassmannValue& a, const GrassmannValue& b);

/// Dense matrix over the Grassmann algebra. Entry parity is checked by the
/// operations that need it (even_det, even_inverse, berezinian).
class GrassmannMatrix {
 public:
  GrassmannMatrix(int rows, int cols, int gens);
  static GrassmannMatrix identity(int n, int gens);

  int rows() const { return rows_; }
  int cols() const { return cols_; }
  int gens() const { return gens_; }

  GrassmannValue& at(int r, int c) { return entries_[static_cast<std::size_t>(r * cols_ + c)]; }
  const GrassmannValue& at(int r, int c) const { return entries_[static_cast<std::size_t>(r * cols_ + c)]; }

  bool all_entries(Parity p) const;

  friend GrassmannMatrix operator*(const GrassmannMatrix& a, const GrassmannMatrix& b);
  friend GrassmannMatrix operator-(const GrassmannMatrix& a, const GrassmannMatrix& b);

 private:
  int rows_;
  int cols_;
  int gens_;
  std::vector<GrassmannValue> entries_;
};

/// Determinant of a square matrix with even entries. Leibniz expansion up to
/// 3x3, division-free minor expansion beyond.
GrassmannValue even_det(const GrassmannMatrix& m);
/// Gauss-Jordan inverse of an even matrix, pivoting on the largest body.
GrassmannMatrix even_inverse(const GrassmannMatrix& m);
/// Ber = det(A - B D^-1 C) det(D)^-1 for even A, D and odd B, C.
GrassmannValue berezinian(const GrassmannMatrix& a, const GrassmannMatrix& b,
                          const GrassmannMatrix& c, const GrassmannMatrix& d);

}  // namespace superloc
