// Copyright 2026 The superloc Authors
// SPDX-License-Identifier: Apache-2.0

#include "superloc/superfun.hpp"

#include <algorithm>
#include <random>

#include "superloc/error.hpp"

namespace superloc {

SuperFunction::SuperFunction(int m, int n) : m_(m), n_(n) {
  if (m < 0 || n < 0 || 2 * n > MultiIndex::kMaxGenerators) {
    throw ValidationError("chart-dimensions", "chart dimensions must satisfy m >= 0, 0 <= n <= 32");
  }
}

SuperFunction SuperFunction::body(int m, int n, BodyExpr e) {
  SuperFunction f(m, n);
  f.add_term({}, {}, e);
  return f;
}

SuperFunction SuperFunction::monomial(int m, int n, MultiIndex xi, MultiIndex xibar, BodyExpr e) {
  if (xi.max_label() > n || xibar.max_label() > n) {
    throw ValidationError("multi-index-range", "odd monomial uses a generator beyond n");
  }
  SuperFunction f(m, n);
  f.add_term(xi, xibar, e);
  return f;
}

SuperFunction SuperFunction::xi(int m, int n, int k) {
  return monomial(m, n, MultiIndex::from_labels({k}, n), {}, BodyExpr(1.0));
}

SuperFunction SuperFunction::xibar(int m, int n, int k) {
  return monomial(m, n, {}, MultiIndex::from_labels({k}, n), BodyExpr(1.0));
}

BodyExpr SuperFunction::coefficient(const MultiIndex& xi, const MultiIndex& xibar) const {
  auto it = terms_.find({xi, xibar});
  return it == terms_.end() ? BodyExpr() : it->second;
}

void SuperFunction::add_term(const MultiIndex& xi, const MultiIndex& xibar, const BodyExpr& e) {
  if (e.is_zero()) return;
  const OddKey key{xi, xibar};
  auto it = terms_.find(key);
  if (it == terms_.end()) {
    terms_.emplace(key, e);
    return;
  }
  it->second = it->second + e;
  if (it->second.is_zero()) terms_.erase(it);
}

Parity SuperFunction::parity() const {
  bool even = false;
  bool odd = false;
  for (const auto& [k, e] : terms_) (k.is_odd() ? odd : even) = true;
  if (odd && even) return Parity::kMixed;
  return odd ? Parity::kOdd : Parity::kEven;
}

bool SuperFunction::is_body_only() const {
  return std::all_of(terms_.begin(), terms_.end(), [](const auto& kv) { return kv.first.length() == 0; });
}

bool SuperFunction::has_xibar() const {
  return std::any_of(terms_.begin(), terms_.end(), [](const auto& kv) { return !kv.first.xibar.empty(); });
}

bool SuperFunction::is_holomorphic() const {
  return !has_xibar() && std::none_of(terms_.begin(), terms_.end(), [](const auto& kv) {
    return kv.second.depends_on_conjugates();
  });
}

bool SuperFunction::contains_opaque() const {
  return std::any_of(terms_.begin(), terms_.end(), [](const auto& kv) { return kv.second.contains_opaque(); });
}

int SuperFunction::max_var() const {
  int best = 0;
  for (const auto& [k, e] : terms_) best = std::max(best, e.max_var());
  return best;
}

SuperFunction SuperFunction::d_xi(int j) const {
  if (j < 1 || j > n_) throw ValidationError("odd-index", "d_xi index out of range");
  SuperFunction out(m_, n_);
  for (const auto& [k, e] : terms_) {
    const int l = k.xi.position(j);
    if (l == 0) continue;
    out.add_term(k.xi.without(j), k.xibar, (l & 1) ? e : -e);
  }
  return out;
}

SuperFunction SuperFunction::d_xibar(int j) const {
  if (j < 1 || j > n_) throw ValidationError("odd-index", "d_xibar index out of range");
  SuperFunction out(m_, n_);
  for (const auto& [k, e] : terms_) {
    const int l = k.xibar.position(j);
    if (l == 0) continue;
    // Passing xi_mu costs (-1)^{L(mu)}, then (-1)^{l-1} inside xibar_lambda.
    const bool negative = ((k.xi.size() + l - 1) & 1) != 0;
    out.add_term(k.xi, k.xibar.without(j), negative ? -e : e);
  }
  return out;
}

SuperFunction SuperFunction::d_z(int i) const {
  if (i < 1 || i > m_) throw ValidationError("even-index", "d_z index out of range");
  SuperFunction out(m_, n_);
  for (const auto& [k, e] : terms_) out.add_term(k.xi, k.xibar, e.diff({i, false}));
  return out;
}

SuperFunction SuperFunction::d_zbar(int i) const {
  if (i < 1 || i > m_) throw ValidationError("even-index", "d_zbar index out of range");
  SuperFunction out(m_, n_);
  for (const auto& [k, e] : terms_) out.add_term(k.xi, k.xibar, e.diff({i, true}));
  return out;
}

SuperFunction SuperFunction::conj() const {
  if (!is_body_only()) {
    throw ValidationError("body-only-conjugation", "conjugation is defined only for functions without odd variables");
  }
  return body(m_, n_, body_part().conj());
}

GrassmannValue SuperFunction::eval(std::span<const Complex> z, const OpaqueTable* opaque) const {
  GrassmannValue out(2 * n_);
  for (const auto& [k, e] : terms_) {
    out.accumulate(MultiIndex::from_bits(odd_mask(k, n_)), e.eval(z, opaque).value());
  }
  return out;
}

void SuperFunction::check_dims(const SuperFunction& other) const {
  if (other.m_ != m_ || other.n_ != n_) {
    throw ValidationError("chart-dimensions", "superfunctions live on different charts");
  }
}

SuperFunction& SuperFunction::operator+=(const SuperFunction& other) {
  check_dims(other);
  for (const auto& [k, e] : other.terms_) add_term(k.xi, k.xibar, e);
  return *this;
}

SuperFunction& SuperFunction::operator-=(const SuperFunction& other) {
  check_dims(other);
  for (const auto& [k, e] : other.terms_) add_term(k.xi, k.xibar, -e);
  return *this;
}

SuperFunction operator*(const SuperFunction& a, const SuperFunction& b) {
  a.check_dims(b);
  const int n = a.n_;
  SuperFunction out(a.m_, n);
  for (const auto& [ka, ea] : a.terms_) {
    const std::uint64_t ma = odd_mask(ka, n);
    for (const auto& [kb, eb] : b.terms_) {
      const std::uint64_t mb = odd_mask(kb, n);
      const int sign = monomial_product_sign(ma, mb);
      if (sign == 0) continue;
      const std::uint64_t merged = ma | mb;
      const std::uint64_t low = n == 0 ? 0 : ((std::uint64_t{1} << n) - 1);
      const BodyExpr prod = ea * eb;
      out.add_term(MultiIndex::from_bits(merged & low), MultiIndex::from_bits(merged >> n), sign < 0 ? -prod : prod);
    }
  }
  return out;
}

SuperFunction sf_mul(const SuperFunction& a, const SuperFunction& b) { return a * b; }

SuperFunction SuperFunction::scaled(const BodyExpr& e) const {
  SuperFunction out(m_, n_);
  if (e.is_zero()) return out;
  for (const auto& [k, c] : terms_) out.add_term(k.xi, k.xibar, c * e);
  return out;
}

std::string SuperFunction::to_string() const {
  if (terms_.empty()) return "0";
  std::string s;
  for (const auto& [k, e] : terms_) {
    if (!s.empty()) s += " + ";
    for (int l : k.xi.labels()) s += "xi" + std::to_string(l) + " ";
    for (int l : k.xibar.labels()) s += "xib" + std::to_string(l) + " ";
    s += e.to_string();
  }
  return s;
}

double sampled_difference(const SuperFunction& a, const SuperFunction& b, int samples, unsigned seed,
                          const OpaqueTable* opaque, double radius) {
  const SuperFunction diff = a - b;
  if (diff.is_zero()) return 0.0;
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> u(-radius, radius);
  std::vector<Complex> z(static_cast<std::size_t>(std::max(a.m(), diff.max_var())));
  double worst = 0.0;
  for (int s = 0; s < samples; ++s) {
    for (auto& c : z) c = {u(rng), u(rng)};
    for (const auto& [k, e] : diff.terms()) worst = std::max(worst, std::abs(e.eval(z, opaque).value()));
  }
  return worst;
}

SuperVectorField::SuperVectorField(int m, int n, std::vector<SuperFunction> f, std::vector<SuperFunction> g)
    : m_(m), n_(n), f_(std::move(f)), g_(std::move(g)) {
  if (static_cast<int>(f_.size()) != m || static_cast<int>(g_.size()) != n) {
    throw ValidationError("field-shape", "vector field needs m d/dz components and n d/dxi components");
  }
  theorem_mode_ = true;
  for (std::size_t i = 0; i < f_.size(); ++i) {
    const std::string label = "f" + std::to_string(i + 1);
    if (f_[i].m() != m || f_[i].n() != n) throw ValidationError("chart-dimensions", label + " lives on another chart");
    if (!f_[i].is_zero() && f_[i].parity() != Parity::kOdd) {
      throw ValidationError("f-odd", label + " must be odd");
    }
    if (!f_[i].is_holomorphic()) throw ValidationError("f-holomorphic", label + " depends on zbar or xibar");
  }
  for (std::size_t j = 0; j < g_.size(); ++j) {
    const std::string label = "g" + std::to_string(j + 1);
    if (g_[j].m() != m || g_[j].n() != n) throw ValidationError("chart-dimensions", label + " lives on another chart");
    if (!g_[j].is_zero() && g_[j].parity() != Parity::kEven) {
      throw ValidationError("g-even", label + " must be even");
    }
    if (!g_[j].is_holomorphic()) throw ValidationError("g-holomorphic", label + " depends on zbar or xibar");
    if (!g_[j].is_body_only()) theorem_mode_ = false;
  }
}

bool SuperVectorField::f_vanishes() const {
  return std::all_of(f_.begin(), f_.end(), [](const SuperFunction& f) { return f.is_zero(); });
}

}  // namespace superloc
