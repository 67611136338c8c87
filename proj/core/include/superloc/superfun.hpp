// Copyright 2026 The superloc Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <map>
#include <span>
#include <string>
#include <vector>

#include "superloc/body_expr.hpp"
#include "superloc/grassmann.hpp"

namespace superloc {

/// Odd monomial xi_mu xibar_lambda, written with all xi before all xibar.
struct OddKey {
  MultiIndex xi;
  MultiIndex xibar;
  int length() const { return xi.size() + xibar.size(); }
  bool is_odd() const { return (length() & 1) != 0; }
  std::strong_ordering operator<=>(const OddKey& other) const {
    if (auto c = xi <=> other.xi; c != 0) return c;
    return xibar <=> other.xibar;
  }
  bool operator==(const OddKey&) const = default;
};

/// Bit mask of an odd monomial in the 2n-generator algebra: xi_k -> beta_k,
/// xibar_k -> beta_{n+k}.
inline std::uint64_t odd_mask(const OddKey& k, int n) { return k.xi.bits() | (k.xibar.bits() << n); }

/// f(z, zbar; xi, xibar) = sum xi_mu xibar_lambda f_{mu;lambda}(z, zbar).
class SuperFunction {
 public:
  using Terms = std::map<OddKey, BodyExpr>;

  SuperFunction(int m = 0, int n = 0);
  static SuperFunction body(int m, int n, BodyExpr e);
  static SuperFunction monomial(int m, int n, MultiIndex xi, MultiIndex xibar, BodyExpr e);
  /// xi_k as a superfunction.
  static SuperFunction xi(int m, int n, int k);
  static SuperFunction xibar(int m, int n, int k);

  int m() const { return m_; }
  int n() const { return n_; }
  const Terms& terms() const { return terms_; }
  bool is_zero() const { return terms_.empty(); }
  BodyExpr coefficient(const MultiIndex& xi, const MultiIndex& xibar) const;
  /// Adds e to the (xi, xibar) coefficient.
  void add_term(const MultiIndex& xi, const MultiIndex& xibar, const BodyExpr& e);

  Parity parity() const;
  bool is_body_only() const;
  /// No zbar and no xibar anywhere.
  bool is_holomorphic() const;
  bool has_xibar() const;
  bool contains_opaque() const;
  int max_var() const;
  /// Body-only part (the empty-monomial coefficient).
  BodyExpr body_part() const { return coefficient({}, {}); }

  SuperFunction d_xi(int j) const;
  SuperFunction d_xibar(int j) const;
  SuperFunction d_z(int i) const;
  SuperFunction d_zbar(int i) const;
  /// Conjugate of a body-only function.
  SuperFunction conj() const;

  /// Substitutes the body point; odd monomials become Grassmann generators.
  GrassmannValue eval(std::span<const Complex> z, const OpaqueTable* opaque = nullptr) const;

  SuperFunction& operator+=(const SuperFunction& other);
  SuperFunction& operator-=(const SuperFunction& other);
  friend SuperFunction operator+(SuperFunction a, const SuperFunction& b) { return a += b; }
  friend SuperFunction operator-(SuperFunction a, const SuperFunction& b) { return a -= b; }
  friend SuperFunction operator-(const SuperFunction& a) { return a.scaled(BodyExpr(-1.0)); }
  friend SuperFunction operator*(const SuperFunction& a, const SuperFunction& b);
  /// Multiplies every coefficient by a body expression (even, so no signs).
  SuperFunction scaled(const BodyExpr& e) const;

  /// Structural equality of coefficients.
  bool operator==(const SuperFunction& other) const = default;

  std::string to_string() const;

 private:
  void check_dims(const SuperFunction& other) const;
  int m_;
  int n_;
  Terms terms_;
};

SuperFunction sf_mul(const SuperFunction& a, const SuperFunction& b);

/// Largest |coefficient| difference of the two functions' evaluations over
/// `samples` seeded random points in the box |Re|,|Im| <= radius. Evaluation
/// errors at a point propagate.
double sampled_difference(const SuperFunction& a, const SuperFunction& b, int samples, unsigned seed,
                          const OpaqueTable* opaque = nullptr, double radius = 1.0);

/// V = sum f_i d/dz_i + sum g_j d/dxi_j.
class SuperVectorField {
 public:
  /// Validates f_i odd and holomorphic, g_j even and holomorphic.
  SuperVectorField(int m, int n, std::vector<SuperFunction> f, std::vector<SuperFunction> g);

  int m() const { return m_; }
  int n() const { return n_; }
  const std::vector<SuperFunction>& f() const { return f_; }
  const std::vector<SuperFunction>& g() const { return g_; }
  const SuperFunction& f(int i) const { return f_.at(static_cast<std::size_t>(i - 1)); }
  const SuperFunction& g(int j) const { return g_.at(static_cast<std::size_t>(j - 1)); }
  /// Every g_j free of odd variables.
  bool theorem_mode() const { return theorem_mode_; }
  bool f_vanishes() const;

 private:
  int m_;
  int n_;
  std::vector<SuperFunction> f_;
  std::vector<SuperFunction> g_;
  bool theorem_mode_ = false;
};

}  // namespace superloc
