// Copyright 2026 The superloc Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <complex>
#include <numbers>

namespace superloc {

using Complex = std::complex<double>;

/// A complex number of the form coeff * (2*pi*i)^tau.
///
/// Residue prefactors are powers of 2*pi/i and the Fubini-Study style
/// coefficients carry powers of i/(2*pi). Keeping the transcendental factor as
/// an integer exponent lets those cancel exactly instead of leaving a few ulps
/// of rounding behind. Sums of unlike powers fall back to plain complex values
/// (tau == 0).
struct TauScalar {
  Complex coeff{0.0, 0.0};
  int tau = 0;

  constexpr TauScalar() = default;
  constexpr TauScalar(Complex c, int t = 0) : coeff(c), tau(t) {}
  constexpr TauScalar(double re) : coeff(re, 0.0), tau(0) {}

  bool is_zero() const { return coeff == Complex{0.0, 0.0}; }
  bool is_one() const { return tau == 0 && coeff == Complex{1.0, 0.0}; }

  /// (2*pi*i)^k with the power of i applied exactly.
  static Complex tau_power(int k) {
    Complex r{1.0, 0.0};
    const int n = k < 0 ? -k : k;
    double mag = 1.0;
    for (int j = 0; j < n; ++j) mag *= 2.0 * std::numbers::pi;
    switch (((k % 4) + 4) % 4) {
      case 0: r = {1.0, 0.0}; break;
      case 1: r = {0.0, 1.0}; break;
      case 2: r = {-1.0, 0.0}; break;
      case 3: r = {0.0, -1.0}; break;
    }
    return k < 0 ? r / mag : r * mag;
  }

  Complex value() const { return tau == 0 ? coeff : coeff * tau_power(tau); }

  friend TauScalar operator*(const TauScalar& a, const TauScalar& b) {
    if (a.is_zero() || b.is_zero()) return {};
    return {a.coeff * b.coeff, a.tau + b.tau};
  }
  friend TauScalar operator/(const TauScalar& a, const TauScalar& b) {
    if (a.is_zero()) return {};
    return {a.coeff / b.coeff, a.tau - b.tau};
  }
  friend TauScalar operator+(const TauScalar& a, const TauScalar& b) {
    if (a.is_zero()) return b;
    if (b.is_zero()) return a;
    if (a.tau == b.tau) return {a.coeff + b.coeff, a.tau};
    return {a.value() + b.value(), 0};
  }
  friend TauScalar operator-(const TauScalar& a) { return {-a.coeff, a.tau}; }
  friend TauScalar operator-(const TauScalar& a, const TauScalar& b) { return a + (-b); }

  friend bool operator==(const TauScalar& a, const TauScalar& b) {
    if (a.is_zero() && b.is_zero()) return true;
    return a.tau == b.tau && a.coeff == b.coeff;
  }

  /// Integer power by repeated squaring (std::pow on complex is not exact
  /// for small integer results).
  TauScalar pow(int k) const {
    if (k == 0) return TauScalar{1.0};
    TauScalar base = k < 0 ? TauScalar{1.0} / *this : *this;
    int n = k < 0 ? -k : k;
    TauScalar acc{1.0};
    while (n > 0) {
      if (n & 1) acc = acc * base;
      base = base * base;
      n >>= 1;
    }
    return acc;
  }
};

/// 2*pi/i as an exact scalar, the per-dimension residue prefactor.
inline TauScalar two_pi_over_i() { return {Complex{-1.0, 0.0}, 1}; }

}  // namespace superloc
