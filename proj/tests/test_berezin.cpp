// Copyright 2026 The superloc Authors
// SPDX-License-Identifier: Apache-2.0

#include <doctest.h>

#include <cmath>
#include <limits>
#include <numbers>

#include "superloc/berezin.hpp"
#include "superloc/error.hpp"
#include "support.hpp"

using namespace superloc;
using superloc::test::Gen;
using T = FormGen::Type;

namespace {

constexpr double kPi = std::numbers::pi;

const BodyExpr z1 = BodyExpr::var(1);
const BodyExpr zb1 = BodyExpr::var(1, true);

SuperFunction top_fn(int m, int n, const BodyExpr& e) {
  return SuperFunction::monomial(m, n, MultiIndex::full(n), MultiIndex::full(n), e);
}

// dz_1 dzbar_1 .. interleaved, then dxi, dxibar, times the top odd monomial.
SuperForm interleaved_top(int m, int n, const BodyExpr& e) {
  std::vector<FormGen> w;
  for (int i = 1; i <= m; ++i) {
    w.push_back({T::kDz, i});
    w.push_back({T::kDzbar, i});
  }
  for (int j = 1; j <= n; ++j) w.push_back({T::kDxi, j});
  for (int j = 1; j <= n; ++j) w.push_back({T::kDxibar, j});
  return SuperForm::word(m, n, w, top_fn(m, n, e));
}

QuadratureSpec spec(int panels, int nodes, double tol, double q = 1.0) {
  QuadratureSpec s;
  s.panels = panels;
  s.nodes = nodes;
  s.tol = tol;
  s.map_power = q;
  return s;
}

}  // namespace

TEST_SUITE("berezin") {

TEST_CASE("berezin_top examples") {
  const int n = 2;
  SuperFunction f = top_fn(1, n, BodyExpr(7.0));
  f.add_term(MultiIndex::from_labels({1}, n), {}, BodyExpr(5.0));
  CHECK(berezin_top(f).eval_complex(std::vector<Complex>{0.0}) == Complex(7.0));
  CHECK(berezin_top(SuperFunction::body(1, n, z1)).is_zero());
  const BodyExpr fs = BodyExpr(1.0) / BodyExpr::power(BodyExpr(1.0) + z1 * zb1, 2);
  CHECK(berezin_top(top_fn(1, 1, fs)) == fs);
}

TEST_CASE("berezin_top is linear and ignores incomplete monomials") {
  Gen g(61);
  for (int trial = 0; trial < 100; ++trial) {
    const int m = g.integer(1, 2), n = g.integer(1, 3);
    const auto a = test::random_superfunction(g, m, n, 5);
    const auto b = test::random_superfunction(g, m, n, 5);
    const Complex c = g.gaussian_int();
    const auto p = test::random_point(g, m);
    const Complex lhs = berezin_top(a + b.scaled(BodyExpr(c))).eval_complex(p);
    const Complex rhs = berezin_top(a).eval_complex(p) + c * berezin_top(b).eval_complex(p);
    CHECK(std::abs(lhs - rhs) < 1e-12);
    SuperFunction partial(m, n);
    for (const auto& [k, e] : a.terms()) {
      if (!(k.xi == MultiIndex::full(n) && k.xibar == MultiIndex::full(n))) partial.add_term(k.xi, k.xibar, e);
    }
    CHECK(berezin_top(partial).is_zero());
  }
}

TEST_CASE("gaussian constants") {
  CHECK(gaussian_constant(1).value() == Complex(0.0, -2.0 * kPi));
  CHECK(std::abs(gaussian_constant(2).value() - Complex(-4.0 * kPi * kPi, 0.0)) < 1e-13);
  CHECK_THROWS_AS(gaussian_constant(0), ValidationError);
}

TEST_CASE("gaussian moments") {
  CHECK(std::abs(gaussian_moment(0) - std::sqrt(kPi)) < 1e-9);
  CHECK(std::abs(gaussian_moment(1)) < 1e-12);
  CHECK(std::abs(gaussian_moment(2) - std::sqrt(kPi) / 2.0) < 1e-9);
  CHECK(std::abs(second_moment_check() - std::sqrt(kPi) / 2.0) < 1e-9);
  CHECK(std::abs(gaussian_moment(4) - 3.0 * std::sqrt(kPi) / 4.0) < 1e-9);
}

TEST_CASE("one-dimensional rules") {
  const auto half = integrate_half_line([](double x) { return Complex(std::exp(-x)); }, spec(2, 16, 1e-12));
  CHECK(std::abs(half.value - 1.0) < 1e-12);
  const auto lorentz =
      integrate_real_line([](double x) { return Complex(1.0 / (1.0 + x * x)); }, spec(2, 16, 1e-12, 3.0));
  CHECK(std::abs(lorentz.value - kPi) < 1e-11);
  const auto rule = full_line_rule(2, 8);
  CHECK(rule.x.size() == 32);
  CHECK(std::is_sorted(rule.x.begin(), rule.x.end()));
}

TEST_CASE("radial oracles") {
  // 2 int_0^inf r/(1+r^2)^2 dr = 1
  const auto r1 = integrate_half_line([](double r) { return Complex(2.0 * r / std::pow(1.0 + r * r, 2)); },
                                      spec(2, 16, 1e-13, 3.0));
  CHECK(std::abs(r1.value - 1.0) < 1e-12);
  // (2/pi^2) int_0^inf 2 pi^2 r^3/(1+r^2)^3 dr = 1
  const auto r2 = integrate_half_line(
      [](double r) { return Complex(2.0 / (kPi * kPi) * 2.0 * kPi * kPi * r * r * r / std::pow(1.0 + r * r, 3)); },
      spec(2, 16, 1e-13, 3.0));
  CHECK(std::abs(r2.value - 1.0) < 1e-9);
}

TEST_CASE("measure convention dz ^ dzbar -> -2i dx dy") {
  // Gaussian: int e^{-|z|^2} dx dy = pi.
  const auto a = interleaved_top(1, 1, BodyExpr::exp(-(z1 * zb1)));
  const auto r = integrate_chart(a, spec(2, 16, 1e-10));
  CHECK(std::abs(r.value - Complex(0.0, -2.0 * kPi)) < 1e-6 * 2.0 * kPi);
  CHECK(std::abs(r.value - gaussian_constant(1).value()) < 1e-6 * 2.0 * kPi);

  // m = 2, n = 0: dz1 dz2 dzbar1 dzbar2 = -(dz1 dzbar1)(dz2 dzbar2) -> -(-2i)^2 = 4.
  SuperForm b = SuperForm::word(2, 0, {{T::kDz, 1}, {T::kDz, 2}, {T::kDzbar, 1}, {T::kDzbar, 2}},
                                SuperFunction::body(2, 0, BodyExpr(1.0)));
  CHECK(chart_integrand(b).eval_complex(std::vector<Complex>{0.0, 0.0}) == Complex(4.0));
  CHECK(chart_integrand(interleaved_top(2, 0, BodyExpr(1.0))).eval_complex(std::vector<Complex>{0.0, 0.0}) ==
        Complex(-4.0));
}

TEST_CASE("Fubini-Study density integrates to one") {
  // (i/2pi) dz dzbar dxi dxibar xi xibar / (1+|z|^2)^2
  const BodyExpr c(TauScalar(Complex(-1.0), -1));
  const auto a = interleaved_top(1, 1, c / BodyExpr::power(BodyExpr(1.0) + z1 * zb1, 2));
  const auto r = integrate_chart(a, spec(2, 16, 1e-10, 3.0));
  CHECK(std::abs(r.value - 1.0) < 1e-8);
}

TEST_CASE("forms without a top monomial integrate to zero") {
  const auto a = SuperForm::word(1, 1, {{T::kDz, 1}, {T::kDxi, 1}, {T::kDxibar, 1}}, top_fn(1, 1, BodyExpr(1.0)));
  CHECK(chart_integrand(a).is_zero());
  CHECK(integrate_chart(a, spec(1, 4, 1e-8)).value == Complex(0.0));
  // top form monomial, but the coefficient lacks xibar
  const auto b = SuperForm::word(1, 1, {{T::kDz, 1}, {T::kDzbar, 1}, {T::kDxi, 1}, {T::kDxibar, 1}},
                                 SuperFunction::xi(1, 1, 1));
  CHECK(integrate_chart(b, spec(1, 4, 1e-8)).value == Complex(0.0));
}

TEST_CASE("integrate_chart is linear") {
  Gen g(62);
  const auto spec1 = spec(2, 16, 1e-11);
  for (int trial = 0; trial < 5; ++trial) {
    const Complex c1 = g.gaussian_int(), c2 = g.gaussian_int();
    const auto a = interleaved_top(1, 1, BodyExpr(c1) * BodyExpr::exp(-(z1 * zb1)));
    const auto b = interleaved_top(1, 1, BodyExpr(c2) * z1 * zb1 * BodyExpr::exp(BodyExpr(-2.0) * z1 * zb1));
    const Complex s = g.gaussian_int();
    const Complex lhs = integrate_chart(a + b.scaled(BodyExpr(s)), spec1).value;
    const Complex rhs = integrate_chart(a, spec1).value + s * integrate_chart(b, spec1).value;
    CHECK(std::abs(lhs - rhs) < 1e-9);
  }
}

TEST_CASE("reruns are bit-identical") {
  const auto a = interleaved_top(2, 1, BodyExpr::exp(-(z1 * zb1 + BodyExpr::var(2) * BodyExpr::var(2, true))));
  const auto s = spec(1, 6, 1.0);
  const auto r1 = integrate_chart(a, s);
  const auto r2 = integrate_chart(a, s);
  CHECK(r1.value == r2.value);
  CHECK(r1.evaluations == r2.evaluations);
}

TEST_CASE("divergence is reported, not returned") {
  QuadratureSpec s = spec(1, 4, 1e-10);
  s.max_doublings = 3;
  CHECK_THROWS_AS(integrate_real_line([](double x) { return Complex(1.0 / (1.0 + std::abs(x))); }, s),
                  NonConvergenceError);
  CHECK_THROWS_AS(
      integrate_real_line([](double) { return Complex(std::numeric_limits<double>::quiet_NaN()); }, s),
      MathDomainError);
}

TEST_CASE("quadrature settings are validated") {
  CHECK_THROWS_AS(spec(0, 4, 1e-3).validate(), ValidationError);
  CHECK_THROWS_AS(spec(1, 4, 0.0).validate(), ValidationError);
  CHECK_THROWS_AS(spec(1, 4, 1e-3, 0.5).validate(), ValidationError);
  CHECK_NOTHROW(spec(1, 4, 1e-3, 2.0).validate());
}

}  // TEST_SUITE
