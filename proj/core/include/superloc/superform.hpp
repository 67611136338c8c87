// Copyright 2026 The superloc Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <compare>
#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "superloc/superfun.hpp"

namespace superloc {

/// Basis 1-form. dz and dzbar are even (anticommuting, square zero); dxi
/// and dxibar are odd (mutually commuting, arbitrary powers).
struct FormGen {
  enum class Type { kDz, kDzbar, kDxi, kDxibar };
  Type type;
  int index;  // 1-based
  bool is_odd() const { return type == Type::kDxi || type == Type::kDxibar; }
};

/// Swap sign of two basis 1-forms: +1 iff both odd.
inline int swap_sign(const FormGen& a, const FormGen& b) { return a.is_odd() && b.is_odd() ? 1 : -1; }

/// Canonical monomial dz_I ^ dzbar_J ^ dxi^a ^ dxibar^b.
struct FormMonomial {
  std::uint64_t dz = 0;     // bit i-1 <=> dz_i
  std::uint64_t dzbar = 0;  // bit i-1 <=> dzbar_i
  std::vector<int> dxi;     // length n
  std::vector<int> dxibar;  // length n

  static FormMonomial unit(int n);
  int odd_degree() const;
  int degree() const;
  bool is_odd() const { return (odd_degree() & 1) != 0; }
  /// The generators in canonical order, odd ones repeated by multiplicity.
  std::vector<FormGen> expand() const;
  std::string to_string() const;

  std::strong_ordering operator<=>(const FormMonomial& other) const;
  bool operator==(const FormMonomial&) const = default;
};

/// Bounds applied by form_exp_truncated; products exceeding any bound are
/// discarded.
struct DegreeCaps {
  int max_dz;
  int max_dzbar;
  int max_dxi_total;
  int max_dxibar_total;
  /// dz, dzbar up to m and dxi, dxibar totals up to n.
  static DegreeCaps for_chart(int m, int n) { return {m, m, n, n}; }
  bool admits(const FormMonomial& mono) const;
};

/// Finite sum of monomials with superfunction coefficients on the right.
class SuperForm {
 public:
  using Terms = std::map<FormMonomial, SuperFunction>;

  SuperForm(int m = 0, int n = 0);
  static SuperForm function(const SuperFunction& f);
  static SuperForm monomial(const FormMonomial& mono, const SuperFunction& f);
  /// Wedge of the listed generators (any order) times f; the reordering sign
  /// is applied.
  static SuperForm word(int m, int n, const std::vector<FormGen>& gens, const SuperFunction& f);
  /// A single basis 1-form with coefficient f.
  static SuperForm one_form(int m, int n, FormGen gen, const SuperFunction& f);

  int m() const { return m_; }
  int n() const { return n_; }
  const Terms& terms() const { return terms_; }
  bool is_zero() const { return terms_.empty(); }
  /// Coefficient of a canonical monomial (zero function if absent).
  SuperFunction component(const FormMonomial& mono) const;
  void add_term(const FormMonomial& mono, const SuperFunction& f);
  bool contains_opaque() const;

  SuperForm& operator+=(const SuperForm& other);
  SuperForm& operator-=(const SuperForm& other);
  friend SuperForm operator+(SuperForm a, const SuperForm& b) { return a += b; }
  friend SuperForm operator-(SuperForm a, const SuperForm& b) { return a -= b; }
  SuperForm scaled(const BodyExpr& e) const;
  /// Keeps only monomials admitted by caps.
  SuperForm truncated(const DegreeCaps& caps) const;

  std::string to_string() const;

 private:
  void check_chart(const SuperForm& other) const;
  void validate(const FormMonomial& mono) const;
  int m_;
  int n_;
  Terms terms_;
};

/// Sign and product of two canonical monomials; sign 0 when a dz or dzbar
/// repeats.
int monomial_wedge(const FormMonomial& a, const FormMonomial& b, FormMonomial& out);

SuperForm wedge(const SuperForm& a, const SuperForm& b);
/// dbar(M h) = (-1)^deg(M) M ^ (sum dzbar_i d_zbar(h, i) + sum dxibar_j d_xibar(h, j)).
SuperForm dbar(const SuperForm& a);
/// The same operator built from the one-form rule
/// dbar(dX h) = sum (-1)^<dX, dw> dw ^ dX d_w(h) (dw over dzbar_i, dxibar_j),
/// extended to monomials by the same (-1)^deg(M) placement.
SuperForm dbar_left(const SuperForm& a);
/// Graded contraction with an odd holomorphic field; functions contract to 0.
SuperForm contract(const SuperVectorField& v, const SuperForm& a);
/// sum_k a^k / k! with every partial product truncated by caps. A body-only
/// degree-0 part h0 is factored out as exp(h0).
SuperForm form_exp_truncated(const SuperForm& a, const DegreeCaps& caps);

/// Convenience monomial constructors.
FormMonomial make_monomial(int n, std::initializer_list<int> dz, std::initializer_list<int> dzbar,
                           std::vector<int> dxi, std::vector<int> dxibar);

/// (0,0)|(n,n) component monomial dxi_1..dxi_n dxibar_1..dxibar_n.
FormMonomial eta_00_monomial(int n);
/// (1,0)|(n-1,n) component monomial dz_j ^ dxi_{all but j} ^ dxibar_all.
FormMonomial eta_10_monomial(int n, int j);

/// (mu; lambda) coefficient of the function attached to `mono`.
BodyExpr extract_component(const SuperForm& a, const FormMonomial& mono, const MultiIndex& mu,
                           const MultiIndex& lambda);
BodyExpr eta_00_nn(const SuperForm& a, const MultiIndex& mu, const MultiIndex& lambda);
BodyExpr eta_10_hat(const SuperForm& a, int j, const MultiIndex& mu, const MultiIndex& lambda);
BodyExpr eta_10_hat_star(const SuperForm& a, const MultiIndex& mu, const MultiIndex& lambda);

/// Largest sampled coefficient of a form at seeded random points; 0 for the
/// zero form.
double sampled_magnitude(const SuperForm& a, int samples, unsigned seed, const OpaqueTable* opaque = nullptr,
                         double radius = 1.0);

}  // namespace superloc
