// Copyright 2026 The superloc Authors
// SPDX-License-Identifier: Apache-2.0

#include "superloc/superform.hpp"

#include <algorithm>
#include <bit>
#include <numeric>
#include <tuple>

#include "superloc/error.hpp"

namespace superloc {

namespace {

int gen_rank(const FormGen& g) { return static_cast<int>(g.type); }

bool gen_less(const FormGen& a, const FormGen& b) {
  return std::tie(a.type, a.index) < std::tie(b.type, b.index);
}

std::uint64_t low_bits(int count) { return count >= 64 ? ~std::uint64_t{0} : ((std::uint64_t{1} << count) - 1); }

}  // namespace

FormMonomial FormMonomial::unit(int n) {
  FormMonomial mono;
  mono.dxi.assign(static_cast<std::size_t>(n), 0);
  mono.dxibar.assign(static_cast<std::size_t>(n), 0);
  return mono;
}

int FormMonomial::odd_degree() const {
  return std::accumulate(dxi.begin(), dxi.end(), 0) + std::accumulate(dxibar.begin(), dxibar.end(), 0);
}

int FormMonomial::degree() const { return std::popcount(dz) + std::popcount(dzbar) + odd_degree(); }

std::vector<FormGen> FormMonomial::expand() const {
  std::vector<FormGen> out;
  for (std::uint64_t b = dz; b; b &= b - 1) out.push_back({FormGen::Type::kDz, std::countr_zero(b) + 1});
  for (std::uint64_t b = dzbar; b; b &= b - 1) out.push_back({FormGen::Type::kDzbar, std::countr_zero(b) + 1});
  for (std::size_t j = 0; j < dxi.size(); ++j)
    for (int k = 0; k < dxi[j]; ++k) out.push_back({FormGen::Type::kDxi, static_cast<int>(j) + 1});
  for (std::size_t j = 0; j < dxibar.size(); ++j)
    for (int k = 0; k < dxibar[j]; ++k) out.push_back({FormGen::Type::kDxibar, static_cast<int>(j) + 1});
  return out;
}

std::string FormMonomial::to_string() const {
  std::string s;
  auto add = [&](const std::string& part) { s += s.empty() ? part : "^" + part; };
  for (const FormGen& g : expand()) {
    static const char* names[] = {"dz", "dzb", "dxi", "dxib"};
    add(names[gen_rank(g)] + std::to_string(g.index));
  }
  return s.empty() ? "1" : s;
}

std::strong_ordering FormMonomial::operator<=>(const FormMonomial& other) const {
  if (auto c = degree() <=> other.degree(); c != 0) return c;
  return std::tie(dz, dzbar, dxi, dxibar) <=> std::tie(other.dz, other.dzbar, other.dxi, other.dxibar);
}

bool DegreeCaps::admits(const FormMonomial& mono) const {
  return std::popcount(mono.dz) <= max_dz && std::popcount(mono.dzbar) <= max_dzbar &&
         std::accumulate(mono.dxi.begin(), mono.dxi.end(), 0) <= max_dxi_total &&
         std::accumulate(mono.dxibar.begin(), mono.dxibar.end(), 0) <= max_dxibar_total;
}

int monomial_wedge(const FormMonomial& a, const FormMonomial& b, FormMonomial& out) {
  if (a.dxi.size() != b.dxi.size() || a.dxibar.size() != b.dxibar.size()) {
    throw ValidationError("chart-dimensions", "form monomials on different charts");
  }
  const int d1 = a.odd_degree();
  int sign = 1;
  // b's dz block moves left past a's odd block and a's dzbar block.
  if ((std::popcount(b.dz) * (d1 + std::popcount(a.dzbar))) & 1) sign = -sign;
  sign *= monomial_product_sign(a.dz, b.dz);
  if (sign == 0) return 0;
  // b's dzbar block moves left past a's odd block.
  if ((std::popcount(b.dzbar) * d1) & 1) sign = -sign;
  sign *= monomial_product_sign(a.dzbar, b.dzbar);
  if (sign == 0) return 0;
  // Odd blocks commute.
  out.dz = a.dz | b.dz;
  out.dzbar = a.dzbar | b.dzbar;
  out.dxi.resize(a.dxi.size());
  out.dxibar.resize(a.dxibar.size());
  for (std::size_t j = 0; j < a.dxi.size(); ++j) {
    out.dxi[j] = a.dxi[j] + b.dxi[j];
    out.dxibar[j] = a.dxibar[j] + b.dxibar[j];
  }
  return sign;
}

SuperForm::SuperForm(int m, int n) : m_(m), n_(n) {
  if (m < 0 || m > 64 || n < 0 || 2 * n > MultiIndex::kMaxGenerators) {
    throw ValidationError("chart-dimensions", "chart dimensions out of range");
  }
}

void SuperForm::validate(const FormMonomial& mono) const {
  if ((mono.dz & ~low_bits(m_)) || (mono.dzbar & ~low_bits(m_))) {
    throw ValidationError("form-monomial", "dz or dzbar index beyond the chart dimension");
  }
  if (static_cast<int>(mono.dxi.size()) != n_ || static_cast<int>(mono.dxibar.size()) != n_) {
    throw ValidationError("form-monomial", "dxi/dxibar multidegree vectors must have length n");
  }
  auto negative = [](int k) { return k < 0; };
  if (std::any_of(mono.dxi.begin(), mono.dxi.end(), negative) ||
      std::any_of(mono.dxibar.begin(), mono.dxibar.end(), negative)) {
    throw ValidationError("form-monomial", "multidegrees must be non-negative");
  }
}

SuperForm SuperForm::function(const SuperFunction& f) {
  SuperForm out(f.m(), f.n());
  out.add_term(FormMonomial::unit(f.n()), f);
  return out;
}

SuperForm SuperForm::monomial(const FormMonomial& mono, const SuperFunction& f) {
  SuperForm out(f.m(), f.n());
  out.add_term(mono, f);
  return out;
}

SuperForm SuperForm::word(int m, int n, const std::vector<FormGen>& gens, const SuperFunction& f) {
  if (f.m() != m || f.n() != n) throw ValidationError("chart-dimensions", "coefficient lives on another chart");
  std::vector<FormGen> w = gens;
  for (const FormGen& g : w) {
    const int limit = g.is_odd() ? n : m;
    if (g.index < 1 || g.index > limit) throw ValidationError("form-monomial", "1-form index out of range");
  }
  // Insertion sort, tracking the swap signs.
  int sign = 1;
  for (std::size_t i = 1; i < w.size(); ++i) {
    for (std::size_t j = i; j > 0 && gen_less(w[j], w[j - 1]); --j) {
      sign *= swap_sign(w[j], w[j - 1]);
      std::swap(w[j], w[j - 1]);
    }
  }
  FormMonomial mono = FormMonomial::unit(n);
  for (std::size_t i = 0; i < w.size(); ++i) {
    const FormGen& g = w[i];
    const std::uint64_t bit = std::uint64_t{1} << (g.index - 1);
    switch (g.type) {
      case FormGen::Type::kDz:
        if (mono.dz & bit) return SuperForm(m, n);
        mono.dz |= bit;
        break;
      case FormGen::Type::kDzbar:
        if (mono.dzbar & bit) return SuperForm(m, n);
        mono.dzbar |= bit;
        break;
      case FormGen::Type::kDxi: ++mono.dxi[static_cast<std::size_t>(g.index - 1)]; break;
      case FormGen::Type::kDxibar: ++mono.dxibar[static_cast<std::size_t>(g.index - 1)]; break;
    }
  }
  SuperForm out(m, n);
  out.add_term(mono, sign < 0 ? -f : f);
  return out;
}

SuperForm SuperForm::one_form(int m, int n, FormGen gen, const SuperFunction& f) { return word(m, n, {gen}, f); }

SuperFunction SuperForm::component(const FormMonomial& mono) const {
  auto it = terms_.find(mono);
  return it == terms_.end() ? SuperFunction(m_, n_) : it->second;
}

void SuperForm::add_term(const FormMonomial& mono, const SuperFunction& f) {
  if (f.m() != m_ || f.n() != n_) throw ValidationError("chart-dimensions", "coefficient lives on another chart");
  validate(mono);
  if (f.is_zero()) return;
  auto it = terms_.find(mono);
  if (it == terms_.end()) {
    terms_.emplace(mono, f);
    return;
  }
  it->second += f;
  if (it->second.is_zero()) terms_.erase(it);
}

bool SuperForm::contains_opaque() const {
  return std::any_of(terms_.begin(), terms_.end(), [](const auto& kv) { return kv.second.contains_opaque(); });
}

void SuperForm::check_chart(const SuperForm& other) const {
  if (other.m_ != m_ || other.n_ != n_) throw ValidationError("chart-dimensions", "forms live on different charts");
}

SuperForm& SuperForm::operator+=(const SuperForm& other) {
  check_chart(other);
  for (const auto& [mono, f] : other.terms_) add_term(mono, f);
  return *this;
}

SuperForm& SuperForm::operator-=(const SuperForm& other) {
  check_chart(other);
  for (const auto& [mono, f] : other.terms_) add_term(mono, -f);
  return *this;
}

SuperForm SuperForm::scaled(const BodyExpr& e) const {
  SuperForm out(m_, n_);
  for (const auto& [mono, f] : terms_) out.add_term(mono, f.scaled(e));
  return out;
}

SuperForm SuperForm::truncated(const DegreeCaps& caps) const {
  SuperForm out(m_, n_);
  for (const auto& [mono, f] : terms_)
    if (caps.admits(mono)) out.terms_.emplace(mono, f);
  return out;
}

std::string SuperForm::to_string() const {
  if (terms_.empty()) return "0";
  std::string s;
  for (const auto& [mono, f] : terms_) {
    if (!s.empty()) s += "\n+ ";
    s += mono.to_string() + " [" + f.to_string() + "]";
  }
  return s;
}

namespace {

// (h_even - h_odd): the coefficient after passing an odd monomial.
SuperFunction parity_twist(const SuperFunction& h) {
  SuperFunction out(h.m(), h.n());
  for (const auto& [k, e] : h.terms()) out.add_term(k.xi, k.xibar, k.is_odd() ? -e : e);
  return out;
}

}  // namespace

SuperForm wedge(const SuperForm& a, const SuperForm& b) {
  if (a.m() != b.m() || a.n() != b.n()) throw ValidationError("chart-dimensions", "forms live on different charts");
  SuperForm out(a.m(), a.n());
  for (const auto& [ma, ha] : a.terms()) {
    const SuperFunction twisted = parity_twist(ha);
    for (const auto& [mb, hb] : b.terms()) {
      FormMonomial prod;
      const int sign = monomial_wedge(ma, mb, prod);
      if (sign == 0) continue;
      SuperFunction coeff = (mb.is_odd() ? twisted : ha) * hb;
      out.add_term(prod, sign < 0 ? -coeff : coeff);
    }
  }
  return out;
}

SuperForm dbar(const SuperForm& a) {
  const int m = a.m();
  const int n = a.n();
  SuperForm out(m, n);
  for (const auto& [mono, h] : a.terms()) {
    SuperForm d(m, n);
    for (int i = 1; i <= m; ++i) d += SuperForm::one_form(m, n, {FormGen::Type::kDzbar, i}, h.d_zbar(i));
    for (int j = 1; j <= n; ++j) d += SuperForm::one_form(m, n, {FormGen::Type::kDxibar, j}, h.d_xibar(j));
    SuperForm term = wedge(SuperForm::monomial(mono, SuperFunction::body(m, n, 1.0)), d);
    out += (mono.degree() & 1) ? term.scaled(-1.0) : term;
  }
  return out;
}

SuperForm dbar_left(const SuperForm& a) {
  const int m = a.m();
  const int n = a.n();
  SuperForm out(m, n);
  for (const auto& [mono, h] : a.terms()) {
    const std::vector<FormGen> gens = mono.expand();
    auto push = [&](FormGen dw, const SuperFunction& dh) {
      if (dh.is_zero()) return;
      std::vector<FormGen> w{dw};
      w.insert(w.end(), gens.begin(), gens.end());
      const bool flip = dw.is_odd() && mono.is_odd();  // (-1)^<M, dw>
      out += SuperForm::word(m, n, w, flip ? -dh : dh);
    };
    for (int i = 1; i <= m; ++i) push({FormGen::Type::kDzbar, i}, h.d_zbar(i));
    for (int j = 1; j <= n; ++j) push({FormGen::Type::kDxibar, j}, h.d_xibar(j));
  }
  return out;
}

SuperForm contract(const SuperVectorField& v, const SuperForm& a) {
  if (v.m() != a.m() || v.n() != a.n()) throw ValidationError("chart-dimensions", "field and form on different charts");
  const int m = a.m();
  const int n = a.n();
  SuperForm out(m, n);
  for (const auto& [mono, h] : a.terms()) {
    const std::vector<FormGen> gens = mono.expand();
    int before = 1;
    int odd_after = mono.odd_degree();
    for (const FormGen& g : gens) {
      if (g.is_odd()) --odd_after;
      const SuperFunction* c = nullptr;
      bool c_odd = false;
      if (g.type == FormGen::Type::kDz) {
        c = &v.f(g.index);
        c_odd = true;
      } else if (g.type == FormGen::Type::kDxi) {
        c = &v.g(g.index);
      }
      if (c && !c->is_zero()) {
        FormMonomial rest = mono;
        if (g.type == FormGen::Type::kDz) {
          rest.dz &= ~(std::uint64_t{1} << (g.index - 1));
        } else {
          --rest.dxi[static_cast<std::size_t>(g.index - 1)];
        }
        int sign = before;
        if (c_odd && (odd_after & 1)) sign = -sign;
        SuperFunction coeff = *c * h;
        out.add_term(rest, sign < 0 ? -coeff : coeff);
      }
      // Passing an even 1-form costs a sign, an odd one does not.
      if (!g.is_odd()) before = -before;
    }
  }
  return out;
}

SuperForm form_exp_truncated(const SuperForm& a, const DegreeCaps& caps) {
  const int m = a.m();
  const int n = a.n();
  const FormMonomial unit = FormMonomial::unit(n);
  BodyExpr h0;
  SuperForm nil(m, n);
  for (const auto& [mono, f] : a.terms()) {
    if (mono == unit) {
      h0 = f.body_part();
      SuperFunction rest = f - SuperFunction::body(m, n, h0);
      nil.add_term(mono, rest);
    } else {
      nil.add_term(mono, f);
    }
  }
  SuperForm sum = SuperForm::function(SuperFunction::body(m, n, 1.0));
  SuperForm power = sum;
  // Past this order every product has too many even 1-forms, too much odd
  // degree, or too many odd variables.
  const int max_order = caps.max_dz + caps.max_dzbar + caps.max_dxi_total + caps.max_dxibar_total + 2 * n + 1;
  for (int k = 1; k <= max_order; ++k) {
    power = wedge(power, nil).truncated(caps).scaled(1.0 / k);
    if (power.is_zero()) break;
    sum += power;
  }
  return h0.is_zero() ? sum : sum.scaled(BodyExpr::exp(h0));
}

FormMonomial make_monomial(int n, std::initializer_list<int> dz, std::initializer_list<int> dzbar,
                           std::vector<int> dxi, std::vector<int> dxibar) {
  FormMonomial mono = FormMonomial::unit(n);
  for (int i : dz) mono.dz |= std::uint64_t{1} << (i - 1);
  for (int i : dzbar) mono.dzbar |= std::uint64_t{1} << (i - 1);
  if (!dxi.empty()) mono.dxi = std::move(dxi);
  if (!dxibar.empty()) mono.dxibar = std::move(dxibar);
  return mono;
}

FormMonomial eta_00_monomial(int n) {
  FormMonomial mono = FormMonomial::unit(n);
  std::fill(mono.dxi.begin(), mono.dxi.end(), 1);
  std::fill(mono.dxibar.begin(), mono.dxibar.end(), 1);
  return mono;
}

FormMonomial eta_10_monomial(int n, int j) {
  if (j < 1 || j > n) throw ValidationError("odd-index", "component index out of range");
  FormMonomial mono = eta_00_monomial(n);
  mono.dz = std::uint64_t{1} << (j - 1);
  mono.dxi[static_cast<std::size_t>(j - 1)] = 0;
  return mono;
}

BodyExpr extract_component(const SuperForm& a, const FormMonomial& mono, const MultiIndex& mu,
                           const MultiIndex& lambda) {
  return a.component(mono).coefficient(mu, lambda);
}

BodyExpr eta_00_nn(const SuperForm& a, const MultiIndex& mu, const MultiIndex& lambda) {
  return extract_component(a, eta_00_monomial(a.n()), mu, lambda);
}

BodyExpr eta_10_hat(const SuperForm& a, int j, const MultiIndex& mu, const MultiIndex& lambda) {
  return extract_component(a, eta_10_monomial(a.n(), j), mu, lambda);
}

BodyExpr eta_10_hat_star(const SuperForm& a, const MultiIndex& mu, const MultiIndex& lambda) {
  std::vector<BodyExpr> parts;
  for (int j = 1; j <= a.n(); ++j) parts.push_back(eta_10_hat(a, j, mu, lambda));
  return BodyExpr::sum(std::move(parts));
}

double sampled_magnitude(const SuperForm& a, int samples, unsigned seed, const OpaqueTable* opaque, double radius) {
  double worst = 0.0;
  const SuperFunction zero(a.m(), a.n());
  for (const auto& [mono, f] : a.terms()) {
    worst = std::max(worst, sampled_difference(f, zero, samples, seed, opaque, radius));
  }
  return worst;
}

}  // namespace superloc
