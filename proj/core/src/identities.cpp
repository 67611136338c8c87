// Copyright 2026 The superloc Authors
// SPDX-License-Identifier: Apache-2.0

#include "superloc/identities.hpp"

#include <bit>
#include <chrono>
#include <cmath>
#include <numbers>
#include <functional>
#include <random>
#include <sstream>

#include "superloc/error.hpp"

namespace superloc {

namespace {

using Rng = std::mt19937_64;

constexpr double kTol = 1e-10;

Complex gaussian_int(Rng& rng, int lo = -2, int hi = 2) {
  std::uniform_int_distribution<int> d(lo, hi);
  const int re = d(rng);
  const int im = d(rng);
  return {static_cast<double>(re), static_cast<double>(im)};
}

int uniform(Rng& rng, int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(rng); }

Complex small_det(const std::vector<std::vector<Complex>>& a) {
  const std::size_t n = a.size();
  if (n == 1) return a[0][0];
  if (n == 2) return a[0][0] * a[1][1] - a[0][1] * a[1][0];
  Complex acc{};
  for (std::size_t c = 0; c < n; ++c) {
    std::vector<std::vector<Complex>> minor;
    for (std::size_t r = 1; r < n; ++r) {
      std::vector<Complex> row;
      for (std::size_t k = 0; k < n; ++k)
        if (k != c) row.push_back(a[r][k]);
      minor.push_back(row);
    }
    acc += ((c % 2 == 0) ? 1.0 : -1.0) * a[0][c] * small_det(minor);
  }
  return acc;
}

BodyExpr random_body(int m, Rng& rng) {
  std::vector<BodyExpr> terms;
  const int count = uniform(rng, 1, 3);
  for (int t = 0; t < count; ++t) {
    std::vector<BodyExpr> factors{BodyExpr(gaussian_int(rng))};
    const int i = uniform(rng, 1, m);
    const int k = uniform(rng, 1, m);
    const int p = uniform(rng, 0, 2);
    const int q = uniform(rng, 0, 2);
    if (p > 0) factors.push_back(BodyExpr::power(BodyExpr::var(i), p));
    if (q > 0) factors.push_back(BodyExpr::power(BodyExpr::var(k, true), q));
    BodyExpr term = BodyExpr::product(factors);
    if (uniform(rng, 0, 3) == 0) {
      const BodyExpr r2 = BodyExpr::var(i) * BodyExpr::var(i, true);
      term = term / (BodyExpr(1.0) + r2);
    }
    terms.push_back(term);
  }
  return BodyExpr::sum(terms);
}

FormGen gen(FormGen::Type t, int i) { return {t, i}; }
constexpr auto kDz = FormGen::Type::kDz;
constexpr auto kDzb = FormGen::Type::kDzbar;
constexpr auto kDxi = FormGen::Type::kDxi;
constexpr auto kDxib = FormGen::Type::kDxibar;

SuperFunction one(int m, int n) { return SuperFunction::body(m, n, BodyExpr(1.0)); }

SuperForm neg(const SuperForm& a) { return a.scaled(BodyExpr(-1.0)); }

SuperForm power(const SuperForm& a, int k) {
  SuperForm acc = SuperForm::function(one(a.m(), a.n()));
  for (int i = 0; i < k; ++i) acc = wedge(acc, a);
  return acc;
}

double factorial(int k) {
  double f = 1.0;
  for (int i = 2; i <= k; ++i) f *= i;
  return f;
}

/// d(gbar_i) = sum_k d_zbar_k(gbar_i) dzbar_k.
SuperForm dgbar(const SuperFunction& g) {
  const SuperFunction gb = g.conj();
  SuperForm out(g.m(), g.n());
  for (int k = 1; k <= g.m(); ++k) out += SuperForm::one_form(g.m(), g.n(), gen(kDzb, k), gb.d_zbar(k));
  return out;
}

SuperForm dg(const SuperFunction& g) {
  SuperForm out(g.m(), g.n());
  for (int k = 1; k <= g.m(); ++k) out += SuperForm::one_form(g.m(), g.n(), gen(kDz, k), g.d_z(k));
  return out;
}

// Shared state for one check run.
struct Ctx {
  double scale;
  bool fault;
  std::ostringstream detail;
  double tol = kTol * scale;

  bool close(double err, const std::string& what) { return within(err, kTol, what); }
  // Compares against a check-specific limit (quadrature checks).
  bool within(double err, double limit, const std::string& what) {
    if (err <= limit * scale) return true;
    detail << what << ": deviation " << err << " exceeds " << limit * scale << "; ";
    return false;
  }
  SuperForm flip(const SuperForm& a) const { return fault ? neg(a) : a; }
  SuperFunction flip(const SuperFunction& a) const { return fault ? -a : a; }
  GrassmannValue flip(const GrassmannValue& a) const { return fault ? -a : a; }
  double forms(const SuperForm& lhs, const SuperForm& rhs, unsigned seed) const {
    return sampled_magnitude(flip(lhs) - rhs, 3, seed);
  }
  double funcs(const SuperFunction& lhs, const SuperFunction& rhs, unsigned seed) const {
    return sampled_difference(flip(lhs), rhs, 3, seed);
  }
};

// ---- Grassmann algebra ----------------------------------------------------

bool check_anticommutation(Ctx& c) {
  bool ok = true;
  for (int gens = 1; gens <= 4; ++gens) {
    for (int i = 1; i <= gens; ++i) {
      for (int j = 1; j <= gens; ++j) {
        const auto bi = GrassmannValue::generator(gens, i);
        const auto bj = GrassmannValue::generator(gens, j);
        const auto lhs = c.flip(gr_mul(bi, bj) + gr_mul(bj, bi));
        ok &= c.close(max_abs_diff(lhs, GrassmannValue(gens)), "b" + std::to_string(i) + " b" + std::to_string(j));
        // The anticommutator is identically zero; also pin the product itself.
        if (i < j) {
          const auto expected = GrassmannValue::monomial(gens, MultiIndex::from_labels({i, j}, gens));
          ok &= c.close(max_abs_diff(c.flip(gr_mul(bi, bj)), expected), "ordered product");
        }
      }
    }
  }
  return ok;
}

bool check_associativity(Ctx& c) {
  constexpr int gens = 4;
  bool ok = true;
  for (std::uint64_t a = 0; a < 16; ++a) {
    for (std::uint64_t b = 0; b < 16; ++b) {
      for (std::uint64_t d = 0; d < 16; ++d) {
        const auto x = GrassmannValue::monomial(gens, MultiIndex::from_bits(a));
        const auto y = GrassmannValue::monomial(gens, MultiIndex::from_bits(b));
        const auto z = GrassmannValue::monomial(gens, MultiIndex::from_bits(d));
        const auto lhs = c.flip(gr_mul(gr_mul(x, y), z));
        const auto rhs = gr_mul(x, gr_mul(y, z));
        if (max_abs_diff(lhs, rhs) > c.tol) {
          ok = c.close(max_abs_diff(lhs, rhs), "monomials " + std::to_string(a) + "," + std::to_string(b) + "," +
                                                   std::to_string(d));
          return ok;
        }
      }
    }
  }
  return ok;
}

bool check_graded_commutativity(Ctx& c) {
  constexpr int gens = 4;
  for (std::uint64_t a = 0; a < 16; ++a) {
    for (std::uint64_t b = 0; b < 16; ++b) {
      const auto x = GrassmannValue::monomial(gens, MultiIndex::from_bits(a));
      const auto y = GrassmannValue::monomial(gens, MultiIndex::from_bits(b));
      const int la = std::popcount(a);
      const int lb = std::popcount(b);
      const double sign = (la * lb) % 2 == 0 ? 1.0 : -1.0;
      const auto lhs = c.flip(gr_mul(x, y));
      const auto rhs = gr_mul(y, x) * sign;
      const bool nonzero = (a & b) == 0;
      if (max_abs_diff(lhs, rhs) > c.tol || (c.fault && nonzero && lhs == rhs)) {
        return c.close(std::max(max_abs_diff(lhs, rhs), 2 * c.tol), "monomials " + std::to_string(a) + "," +
                                                                          std::to_string(b));
      }
    }
  }
  return true;
}

GrassmannValue random_element(int gens, Parity p, Rng& rng, bool with_body) {
  GrassmannValue v(gens);
  const std::uint64_t full = (std::uint64_t{1} << gens) - 1;
  for (std::uint64_t bits = 0; bits <= full; ++bits) {
    const int len = std::popcount(bits);
    if (len == 0 && !with_body) continue;
    if (p == Parity::kEven && len % 2 != 0) continue;
    if (p == Parity::kOdd && len % 2 == 0) continue;
    if (uniform(rng, 0, 2) == 0 && len > 0) continue;
    v.accumulate(MultiIndex::from_bits(bits), gaussian_int(rng));
  }
  return v;
}

bool check_inverse(Ctx& c) {
  Rng rng(11);
  bool ok = true;
  for (int trial = 0; trial < 20; ++trial) {
    const int gens = uniform(rng, 2, 6);
    GrassmannValue a = random_element(gens, Parity::kEven, rng, true);
    if (a.body() == Complex{}) a.accumulate(MultiIndex{}, Complex{1.0, 1.0});
    const auto lhs = c.flip(gr_mul(a, gr_inverse(a)));
    ok &= c.close(max_abs_diff(lhs, GrassmannValue::scalar(gens, 1.0)), "a * a^-1");
  }
  return ok;
}

bool check_berezinian_block(Ctx& c) {
  Rng rng(23);
  bool ok = true;
  for (int trial = 0; trial < 20; ++trial) {
    const int p = uniform(rng, 1, 3);
    const int q = uniform(rng, 1, 3);
    const int gens = 4;
    GrassmannMatrix a(p, p, gens), b(p, q, gens), cc(q, p, gens), d(q, q, gens);
    for (int r = 0; r < p; ++r)
      for (int k = 0; k < p; ++k) a.at(r, k) = random_element(gens, Parity::kEven, rng, true);
    for (int r = 0; r < p; ++r)
      for (int k = 0; k < q; ++k) b.at(r, k) = random_element(gens, Parity::kOdd, rng, false);
    for (int r = 0; r < q; ++r)
      for (int k = 0; k < q; ++k) d.at(r, k) = random_element(gens, Parity::kEven, rng, true);
    // Diagonally dominant body keeps D invertible.
    for (int r = 0; r < q; ++r) d.at(r, r).accumulate(MultiIndex{}, 10.0);
    const auto ber = c.flip(berezinian(a, b, cc, d));
    const auto expected = gr_mul(even_det(a), gr_inverse(even_det(d)));
    ok &= c.close(max_abs_diff(ber, expected), "Ber with C = 0");
  }
  return ok;
}

// ---- Odd derivatives --------------------------------------------------------

std::vector<SuperFunction> all_monomials(int m, int n, const BodyExpr& coeff) {
  std::vector<SuperFunction> out;
  const std::uint64_t full = (std::uint64_t{1} << n) - 1;
  for (std::uint64_t x = 0; x <= full; ++x)
    for (std::uint64_t y = 0; y <= full; ++y)
      out.push_back(SuperFunction::monomial(m, n, MultiIndex::from_bits(x), MultiIndex::from_bits(y), coeff));
  return out;
}

// Left derivatives are characterised by d_l(theta_k) = delta_lk and
// d_l(theta_l h) = h - theta_l d_l(h).
bool check_derivative_signs(Ctx& c) {
  bool ok = true;
  for (int n = 1; n <= 3; ++n) {
    const int m = 1;
    const BodyExpr coeff = BodyExpr::var(1) + BodyExpr(2.0);
    for (const auto& h : all_monomials(m, n, coeff)) {
      for (int l = 1; l <= n; ++l) {
        const auto xl = SuperFunction::xi(m, n, l);
        const auto xbl = SuperFunction::xibar(m, n, l);
        ok &= c.close(c.funcs((xl * h).d_xi(l), h - xl * h.d_xi(l), 3), "d_xi(xi h) " + h.to_string());
        ok &= c.close(c.funcs((xbl * h).d_xibar(l), h - xbl * h.d_xibar(l), 5), "d_xibar(xibar h) " + h.to_string());
      }
      if (!ok) return false;
    }
    for (int l = 1; l <= n; ++l) {
      for (int k = 1; k <= n; ++k) {
        const double delta = l == k ? 1.0 : 0.0;
        ok &= c.close(c.funcs(SuperFunction::xi(m, n, k).d_xi(l), SuperFunction::body(m, n, BodyExpr(delta)), 7),
                      "d_xi(xi)");
        ok &= c.close(c.funcs(SuperFunction::xi(m, n, k).d_xibar(l), SuperFunction(m, n), 7), "d_xibar(xi)");
        ok &= c.close(
            c.funcs(SuperFunction::xibar(m, n, k).d_xibar(l), SuperFunction::body(m, n, BodyExpr(delta)), 7),
            "d_xibar(xibar)");
      }
    }
  }
  return ok;
}

bool check_derivative_anticommutation(Ctx& c) {
  bool ok = true;
  for (int n = 1; n <= 3; ++n) {
    const int m = 1;
    const auto monos = all_monomials(m, n, BodyExpr::var(1));
    std::vector<std::function<SuperFunction(const SuperFunction&)>> ders;
    for (int l = 1; l <= n; ++l) {
      ders.push_back([l](const SuperFunction& f) { return f.d_xi(l); });
      ders.push_back([l](const SuperFunction& f) { return f.d_xibar(l); });
    }
    for (const auto& h : monos) {
      for (std::size_t a = 0; a < ders.size(); ++a) {
        for (std::size_t b = 0; b < ders.size(); ++b) {
          const auto lhs = ders[a](ders[b](h)) + ders[b](ders[a](h));
          if (c.fault && a != b && !ders[a](ders[b](h)).is_zero()) {
            ok &= c.close(c.funcs(ders[a](ders[b](h)), ders[a](ders[b](h)), 9), "flipped second derivative");
          }
          ok &= c.close(c.funcs(lhs, SuperFunction(m, n), 9), "odd derivatives anticommute");
        }
        // Even derivatives commute with odd ones.
        const auto dz = [](const SuperFunction& f) { return f.d_z(1); };
        ok &= c.close(c.funcs(dz(ders[a](h)), ders[a](dz(h)), 9), "d_z commutes with odd derivatives");
      }
      if (!ok) return false;
    }
  }
  return ok;
}

bool check_leibniz(Ctx& c) {
  bool ok = true;
  const int m = 2;
  const int n = 2;
  Rng rng(31);
  const auto monos = all_monomials(m, n, BodyExpr(1.0));
  for (const auto& a0 : monos) {
    const auto a = a0.scaled(random_body(m, rng));
    const double sign = a.parity() == Parity::kOdd ? -1.0 : 1.0;
    for (const auto& b0 : monos) {
      const auto b = b0.scaled(random_body(m, rng));
      for (int l = 1; l <= n; ++l) {
        const auto lhs = (a * b).d_xi(l);
        const auto rhs = a.d_xi(l) * b + (a * b.d_xi(l)).scaled(BodyExpr(sign));
        ok &= c.close(c.funcs(lhs, rhs, 13), "graded Leibniz d_xi");
        const auto lhs2 = (a * b).d_xibar(l);
        const auto rhs2 = a.d_xibar(l) * b + (a * b.d_xibar(l)).scaled(BodyExpr(sign));
        ok &= c.close(c.funcs(lhs2, rhs2, 13), "graded Leibniz d_xibar");
      }
      const auto lhs = (a * b).d_zbar(1);
      const auto rhs = a.d_zbar(1) * b + a * b.d_zbar(1);
      ok &= c.close(c.funcs(lhs, rhs, 13), "Leibniz d_zbar");
      if (!ok) return false;
    }
  }
  return ok;
}

// ---- Forms ----------------------------------------------------------------

bool check_two_form_table(Ctx& c) {
  const int m = 2;
  const int n = 2;
  bool ok = true;
  const auto u = one(m, n);
  for (auto e1 : {kDz, kDzb}) {
    for (auto e2 : {kDz, kDzb}) {
      for (auto o1 : {kDxi, kDxib}) {
        for (auto o2 : {kDxi, kDxib}) {
          for (int i = 1; i <= 2; ++i) {
            const int k = 3 - i;
            for (int j = 1; j <= 2; ++j) {
              for (int l = 1; l <= 2; ++l) {
                // The four orderings EO/OE on each side.
                for (int shape = 0; shape < 4; ++shape) {
                  const auto a = (shape & 1) ? std::vector<FormGen>{gen(o1, j), gen(e1, i)}
                                             : std::vector<FormGen>{gen(e1, i), gen(o1, j)};
                  const auto b = (shape & 2) ? std::vector<FormGen>{gen(o2, l), gen(e2, k)}
                                             : std::vector<FormGen>{gen(e2, k), gen(o2, l)};
                  const auto ka = SuperForm::word(m, n, a, u);
                  const auto kb = SuperForm::word(m, n, b, u);
                  ok &= c.close(c.forms(wedge(ka, kb), neg(wedge(kb, ka)), 17), "2-forms anticommute");
                }
              }
            }
          }
        }
      }
    }
  }
  return ok;
}

std::vector<SuperForm> small_basis(int m, int n) {
  std::vector<SuperForm> out;
  const std::vector<SuperFunction> coeffs{
      one(m, n), SuperFunction::xi(m, n, 1).scaled(BodyExpr::var(1)), SuperFunction::xibar(m, n, 2),
      SuperFunction::xi(m, n, 1) * SuperFunction::xi(m, n, 2)};
  std::vector<std::vector<FormGen>> words{{}};
  const std::vector<FormGen> gens{gen(kDz, 1), gen(kDz, 2), gen(kDzb, 1), gen(kDxi, 1), gen(kDxi, 2), gen(kDxib, 1)};
  for (const auto& g : gens) words.push_back({g});
  for (std::size_t a = 0; a < gens.size(); ++a)
    for (std::size_t b = a; b < gens.size(); ++b) words.push_back({gens[a], gens[b]});
  for (std::size_t w = 0; w < words.size(); ++w) {
    const auto& f = coeffs[w % coeffs.size()];
    const auto form = SuperForm::word(m, n, words[w], f);
    if (!form.is_zero()) out.push_back(form);
  }
  return out;
}

int form_degree(const SuperForm& a) { return a.terms().begin()->first.degree(); }
int form_parity(const SuperForm& a) {
  const auto& [mono, f] = *a.terms().begin();
  return (mono.odd_degree() + (f.parity() == Parity::kOdd ? 1 : 0)) % 2;
}

bool check_graded_commutation(Ctx& c) {
  const auto basis = small_basis(2, 2);
  bool ok = true;
  for (const auto& k : basis) {
    for (const auto& l : basis) {
      const int e = form_degree(k) * form_degree(l) + form_parity(k) * form_parity(l);
      const auto rhs = e % 2 == 0 ? wedge(l, k) : neg(wedge(l, k));
      const auto lhs = wedge(k, l);
      if (c.fault && !lhs.is_zero()) {
        ok &= c.close(c.forms(lhs, rhs, 19), "K ^ L against L ^ K");
        return ok;
      }
      ok &= c.close(c.forms(lhs, rhs, 19), "K ^ L = (-1)^(kl + e(K)e(L)) L ^ K for " + k.to_string() + " and " +
                                              l.to_string());
      if (!ok) return false;
    }
  }
  return ok;
}

bool check_wedge_associativity(Ctx& c) {
  bool ok = true;
  for (unsigned s = 0; s < 12; ++s) {
    const auto a = random_form(2, 2, 100 + s, 2);
    const auto b = random_form(2, 2, 200 + s, 2);
    const auto d = random_form(2, 2, 300 + s, 2);
    ok &= c.close(c.forms(wedge(wedge(a, b), d), wedge(a, wedge(b, d)), 29 + s), "(a ^ b) ^ c");
  }
  return ok;
}

bool check_dbar_squared(Ctx& c) {
  bool ok = true;
  for (unsigned s = 0; s < 16; ++s) {
    const int m = 1 + static_cast<int>(s % 3);
    const int n = 1 + static_cast<int>(s % 2);
    const auto a = random_form(m, n, 400 + s, 3);
    const auto dd = dbar(dbar(a));
    ok &= c.close(c.fault ? sampled_magnitude(neg(dbar(a)) - dbar(a), 3, 37) : sampled_magnitude(dd, 3, 37),
                  "dbar dbar of " + a.to_string());
  }
  return ok;
}

bool check_dbar_left(Ctx& c) {
  bool ok = true;
  for (unsigned s = 0; s < 16; ++s) {
    const int m = 1 + static_cast<int>(s % 3);
    const int n = 1 + static_cast<int>((s / 3) % 2);
    const auto a = random_form(m, n, 500 + s, 3);
    ok &= c.close(c.forms(dbar(a), dbar_left(a), 41), "dbar against the one-form rule");
  }
  return ok;
}

// ---- Localizing form identities -------------------------------------------

struct Setup {
  int n;
  std::vector<SuperFunction> g;
  Complex det;
  SuperForm omega1;
  SuperForm omega2;
  SuperForm d1;  // dbar omega1
  SuperForm d2;  // dbar omega2
  std::vector<SuperForm> dgb;
};

Setup make_setup(int n, unsigned seed) {
  Setup s{n, random_linear_g(n, seed), {}, {}, {}, {}, {}, {}};
  std::vector<std::vector<Complex>> a(static_cast<std::size_t>(n), std::vector<Complex>(static_cast<std::size_t>(n)));
  const std::vector<Complex> zero(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      a[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)] =
          s.g[static_cast<std::size_t>(i)].d_z(j + 1).body_part().eval_complex(zero);
  s.det = small_det(a);
  s.omega1 = localizing_form(s.g, true, false);
  s.omega2 = localizing_form(s.g, false, true);
  s.d1 = dbar(s.omega1);
  s.d2 = dbar(s.omega2);
  for (const auto& g : s.g) s.dgb.push_back(dgbar(g));
  return s;
}

bool check_dbar_localizing(Ctx& c) {
  bool ok = true;
  for (int n = 2; n <= 3; ++n) {
    const auto s = make_setup(n, 50 + static_cast<unsigned>(n));
    SuperForm r1(n, n), r2(n, n);
    for (int i = 1; i <= n; ++i) {
      const auto& dgi = s.dgb[static_cast<std::size_t>(i - 1)];
      r1 += wedge(dgi, SuperForm::one_form(n, n, gen(kDz, i), one(n, n)));
      r2 += wedge(dgi, SuperForm::one_form(n, n, gen(kDxi, i), one(n, n)));
    }
    ok &= c.close(c.forms(dbar(s.omega1 + s.omega2), r1 + r2, 43), "dbar omega");
    ok &= c.close(c.forms(s.d1, r1, 43), "dbar omega1");
    ok &= c.close(c.forms(s.d2, r2, 43), "dbar omega2");
  }
  return ok;
}

SuperForm pair(const Setup& s, int i, FormGen::Type t) {
  return wedge(s.dgb[static_cast<std::size_t>(i - 1)], SuperForm::one_form(s.n, s.n, gen(t, i), one(s.n, s.n)));
}

bool check_power_minus_one(Ctx& c) {
  bool ok = true;
  for (int n = 2; n <= 3; ++n) {
    const auto s = make_setup(n, 60 + static_cast<unsigned>(n));
    SuperForm rhs(n, n);
    for (int j = 1; j <= n; ++j) {
      SuperForm prod = SuperForm::function(one(n, n));
      for (int i = 1; i <= n; ++i)
        if (i != j) prod = wedge(prod, pair(s, i, kDz));
      rhs += prod.scaled(BodyExpr(factorial(n - 1)));
    }
    ok &= c.close(c.forms(power(s.d1, n - 1), rhs, 47), "(dbar omega1)^(n-1), n=" + std::to_string(n));
  }
  return ok;
}

bool check_top_power(Ctx& c) {
  bool ok = true;
  for (int n = 2; n <= 3; ++n) {
    const auto s = make_setup(n, 70 + static_cast<unsigned>(n));
    SuperForm rhs = SuperForm::function(one(n, n));
    for (const auto& g : s.g) rhs = wedge(rhs, dg(g));
    for (const auto& d : s.dgb) rhs = wedge(rhs, d);
    const double sign = ((n * (n + 1) / 2) % 2 == 0) ? 1.0 : -1.0;
    rhs = rhs.scaled(BodyExpr(sign * factorial(n) / s.det));
    ok &= c.close(c.forms(power(s.d1, n), rhs, 53), "(dbar omega1)^n, n=" + std::to_string(n));
  }
  return ok;
}

bool check_omega2_square(Ctx& c) {
  bool ok = true;
  for (int n = 2; n <= 3; ++n) {
    const auto s = make_setup(n, 80 + static_cast<unsigned>(n));
    const auto sq = wedge(s.d2, s.d2);
    ok &= c.close(c.fault ? c.forms(s.d2, s.d2, 59) : sampled_magnitude(sq, 3, 59), "(dbar omega2)^2");
  }
  return ok;
}

bool check_mixed_power(Ctx& c) {
  bool ok = true;
  for (int n = 2; n <= 3; ++n) {
    const auto s = make_setup(n, 90 + static_cast<unsigned>(n));
    SuperForm rhs(n, n);
    const double sign = ((n * (n + 1) / 2) % 2 == 0) ? 1.0 : -1.0;
    for (int j = 1; j <= n; ++j) {
      std::vector<FormGen> word;
      for (int i = 1; i <= n; ++i) word.push_back(gen(i == j ? kDxi : kDz, i));
      SuperForm term = SuperForm::word(n, n, word, one(n, n));
      for (const auto& d : s.dgb) term = wedge(term, d);
      rhs += term.scaled(BodyExpr(sign * factorial(n - 1)));
    }
    ok &= c.close(c.forms(wedge(power(s.d1, n - 1), s.d2), rhs, 61),
                  "(dbar omega1)^(n-1) dbar omega2, n=" + std::to_string(n));
  }
  return ok;
}

bool check_exp_contraction(Ctx& c) {
  bool ok = true;
  for (int n = 2; n <= 3; ++n) {
    const auto g = random_linear_g(n, 100 + static_cast<unsigned>(n));
    const auto v = random_theorem_field(g, 110 + static_cast<unsigned>(n));
    const auto omega = localizing_form(g);
    const auto lhs = form_exp_truncated(neg(contract(v, omega)), DegreeCaps::for_chart(n, n));
    std::vector<BodyExpr> gg;
    SuperFunction gf(n, n);
    for (int i = 0; i < n; ++i) {
      const auto& gi = g[static_cast<std::size_t>(i)];
      gg.push_back(gi.conj().body_part() * gi.body_part());
      gf += gi.conj() * v.f()[static_cast<std::size_t>(i)];
    }
    const auto rhs = SuperFunction::body(n, n, BodyExpr::exp(-BodyExpr::sum(gg))) * (one(n, n) - gf);
    ok &= c.close(c.forms(lhs, SuperForm::function(rhs), 67), "exp(-i_V omega), n=" + std::to_string(n));
  }
  return ok;
}

bool check_exp_splitting(Ctx& c) {
  bool ok = true;
  for (int n = 2; n <= 3; ++n) {
    const auto s = make_setup(n, 120 + static_cast<unsigned>(n));
    const auto caps = DegreeCaps::for_chart(n, n);
    const auto lhs = form_exp_truncated(s.d1 + s.d2, caps);
    const auto rhs = wedge(form_exp_truncated(s.d1, caps), SuperForm::function(one(n, n)) + s.d2).truncated(caps);
    ok &= c.close(c.forms(lhs, rhs, 71), "exp(dbar omega1 + dbar omega2), n=" + std::to_string(n));
  }
  return ok;
}

bool check_exp_scaled(Ctx& c) {
  bool ok = true;
  for (int n = 2; n <= 3; ++n) {
    const auto s = make_setup(n, 130 + static_cast<unsigned>(n));
    const auto caps = DegreeCaps::for_chart(n, n);
    const double t = 0.7;
    const auto lhs = form_exp_truncated((s.d1 + s.d2).scaled(BodyExpr(-1.0 / t)), caps);
    SuperForm rhs = form_exp_truncated(s.d1.scaled(BodyExpr(-1.0 / t)), caps);
    for (int j = 1; j <= n; ++j) {
      const double coeff = (j % 2 == 0 ? 1.0 : -1.0) / factorial(j - 1) / std::pow(t, j);
      rhs += wedge(power(s.d1, j - 1), s.d2).scaled(BodyExpr(coeff));
    }
    ok &= c.close(c.forms(lhs, rhs, 73), "exp(-dbar omega / t), n=" + std::to_string(n));
  }
  return ok;
}

bool check_closure(Ctx& c) {
  bool ok = true;
  for (int n = 1; n <= 3; ++n) {
    Rng rng(140 + static_cast<unsigned>(n));
    auto g = random_linear_g(n, 150 + static_cast<unsigned>(n));
    for (int i = 1; i <= n; ++i) {
      auto& gi = g[static_cast<std::size_t>(i - 1)];
      gi += SuperFunction::body(n, n, BodyExpr(gaussian_int(rng)) * BodyExpr::power(BodyExpr::var(i), 2));
    }
    const auto v = random_theorem_field(g, 160 + static_cast<unsigned>(n));
    const auto w = localizing_form(g);
    const auto once = dbar(w) + contract(v, w);
    const auto twice = dbar(once) + contract(v, once);
    ok &= c.close(c.fault ? c.forms(once, once, 79) : sampled_magnitude(twice, 3, 79),
                  "(dbar + i_V)^2 omega, n=" + std::to_string(n));
  }
  return ok;
}

// ---- Gaussian normalisation ----------------------------------------------

bool check_gaussian_constant(Ctx& c) {
  const int n = 1;
  SuperFunction top = SuperFunction::monomial(n, n, MultiIndex::full(n), MultiIndex::full(n),
                                              BodyExpr::exp(-(BodyExpr::var(1) * BodyExpr::var(1, true))));
  const auto form = SuperForm::word(n, n, {gen(kDz, 1), gen(kDzb, 1), gen(kDxi, 1), gen(kDxib, 1)}, top);
  QuadratureSpec q;
  q.panels = 2;
  q.nodes = 16;
  q.tol = 1e-10;
  const Complex got = integrate_chart(c.flip(form), q).value;
  const Complex want = gaussian_constant(n).value();
  return c.within(std::abs(got - want) / std::abs(want), 1e-7, "Gaussian chart integral relative");
}

bool check_second_moment(Ctx& c) {
  const double got = (c.fault ? -1.0 : 1.0) * second_moment_check();
  const double want = std::sqrt(std::numbers::pi) / 2.0;
  return c.within(std::abs(got - want), 1e-9, "second moment of exp(-x^2)");
}

using CheckFn = bool (*)(Ctx&);

const std::vector<std::pair<std::string, CheckFn>>& registry() {
  static const std::vector<std::pair<std::string, CheckFn>> checks{
      {"grassmann-anticommutation", check_anticommutation},
      {"grassmann-associativity", check_associativity},
      {"grassmann-graded-commutativity", check_graded_commutativity},
      {"grassmann-inverse", check_inverse},
      {"berezinian-block-diagonal", check_berezinian_block},
      {"derivative-signs", check_derivative_signs},
      {"derivative-anticommutation", check_derivative_anticommutation},
      {"derivative-leibniz", check_leibniz},
      {"wedge-two-form-anticommutation", check_two_form_table},
      {"wedge-graded-commutation", check_graded_commutation},
      {"wedge-associativity", check_wedge_associativity},
      {"dbar-squared", check_dbar_squared},
      {"dbar-one-form-rule", check_dbar_left},
      {"dbar-localizing-form", check_dbar_localizing},
      {"omega1-power-n-minus-1", check_power_minus_one},
      {"omega1-top-power", check_top_power},
      {"omega2-square", check_omega2_square},
      {"omega1-omega2-mixed-power", check_mixed_power},
      {"exp-contraction", check_exp_contraction},
      {"exp-splitting", check_exp_splitting},
      {"exp-scaled-expansion", check_exp_scaled},
      {"localizing-form-closure", check_closure},
      {"gaussian-constant", check_gaussian_constant},
      {"gaussian-second-moment", check_second_moment},
  };
  return checks;
}

IdentityCheck run_one(const std::string& name, CheckFn fn, const SelftestOptions& opts) {
  Ctx ctx{opts.tol_scale, opts.inject_fault == name, {}};
  IdentityCheck out;
  out.name = name;
  const auto start = std::chrono::steady_clock::now();
  try {
    out.pass = fn(ctx);
    out.detail = ctx.detail.str();
  } catch (const Error& e) {
    out.pass = false;
    out.detail = std::string(to_string(e.kind())) + " [" + e.invariant() + "]: " + e.what();
  }
  out.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return out;
}

}  // namespace

std::vector<SuperFunction> random_linear_g(int n, unsigned seed) {
  Rng rng(seed);
  for (;;) {
    std::vector<std::vector<Complex>> a(static_cast<std::size_t>(n), std::vector<Complex>(static_cast<std::size_t>(n)));
    for (auto& row : a)
      for (auto& x : row) x = gaussian_int(rng);
    if (std::abs(small_det(a)) < 0.5) continue;
    std::vector<SuperFunction> g;
    for (const auto& row : a) {
      std::vector<BodyExpr> terms;
      for (int j = 0; j < n; ++j) terms.push_back(BodyExpr(row[static_cast<std::size_t>(j)]) * BodyExpr::var(j + 1));
      g.push_back(SuperFunction::body(n, n, BodyExpr::sum(terms)));
    }
    return g;
  }
}

SuperVectorField random_theorem_field(const std::vector<SuperFunction>& g, unsigned seed, bool with_f) {
  Rng rng(seed);
  const int n = static_cast<int>(g.size());
  const int m = g.empty() ? 0 : g.front().m();
  std::vector<SuperFunction> f;
  for (int i = 1; i <= m; ++i) {
    SuperFunction fi(m, n);
    if (with_f) {
      for (int k = 1; k <= n; ++k) {
        const BodyExpr coeff = BodyExpr(gaussian_int(rng)) + BodyExpr(gaussian_int(rng)) * BodyExpr::var(uniform(rng, 1, m));
        fi += SuperFunction::xi(m, n, k).scaled(coeff);
      }
    }
    f.push_back(fi);
  }
  return SuperVectorField(m, n, f, g);
}

SuperForm localizing_form(const std::vector<SuperFunction>& g, bool with_even, bool with_odd) {
  const int n = static_cast<int>(g.size());
  const int m = g.empty() ? 0 : g.front().m();
  SuperForm out(m, n);
  for (int i = 1; i <= n; ++i) {
    const SuperFunction gb = g[static_cast<std::size_t>(i - 1)].conj();
    if (with_even && i <= m) out += SuperForm::one_form(m, n, gen(kDz, i), gb);
    if (with_odd) out += SuperForm::one_form(m, n, gen(kDxi, i), gb);
  }
  return out;
}

SuperFunction random_superfunction(int m, int n, unsigned seed, int terms) {
  Rng rng(seed);
  SuperFunction out(m, n);
  const int full = (1 << n) - 1;
  for (int t = 0; t < terms; ++t) {
    const auto x = MultiIndex::from_bits(static_cast<std::uint64_t>(uniform(rng, 0, full)));
    const auto y = MultiIndex::from_bits(static_cast<std::uint64_t>(uniform(rng, 0, full)));
    out.add_term(x, y, random_body(m, rng));
  }
  return out;
}

SuperForm random_form(int m, int n, unsigned seed, int terms) {
  Rng rng(seed);
  SuperForm out(m, n);
  for (int t = 0; t < terms; ++t) {
    FormMonomial mono = FormMonomial::unit(n);
    mono.dz = static_cast<std::uint64_t>(uniform(rng, 0, (1 << m) - 1));
    mono.dzbar = static_cast<std::uint64_t>(uniform(rng, 0, (1 << m) - 1));
    for (auto& d : mono.dxi) d = uniform(rng, 0, 2);
    for (auto& d : mono.dxibar) d = uniform(rng, 0, 2);
    out.add_term(mono, random_superfunction(m, n, static_cast<unsigned>(rng()), 2));
  }
  return out;
}

std::vector<std::string> identity_names() {
  std::vector<std::string> out;
  for (const auto& [name, fn] : registry()) out.push_back(name);
  return out;
}

std::vector<IdentityCheck> run_identity_suite(const SelftestOptions& opts) {
  if (!(opts.tol_scale > 0.0)) throw ValidationError("tolerance-scale", "tolerance scale must be positive");
  if (!opts.inject_fault.empty()) {
    bool known = false;
    for (const auto& [name, fn] : registry()) known |= name == opts.inject_fault;
    if (!known) throw ValidationError("identity-name", "unknown identity '" + opts.inject_fault + "'");
  }
  std::vector<IdentityCheck> out;
  for (const auto& [name, fn] : registry()) out.push_back(run_one(name, fn, opts));
  return out;
}

IdentityCheck run_identity(const std::string& name, const SelftestOptions& opts) {
  for (const auto& [n, fn] : registry())
    if (n == name) return run_one(n, fn, opts);
  throw ValidationError("identity-name", "unknown identity '" + name + "'");
}

}  // namespace superloc
