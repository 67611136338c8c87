// Copyright 2026 The superloc Authors
// SPDX-License-Identifier: Apache-2.0

#include "superloc/berezin.hpp"

#include <cmath>

#include "superloc/error.hpp"

namespace superloc {

BodyExpr berezin_top(const SuperFunction& f) {
  const MultiIndex all = MultiIndex::full(f.n());
  return f.coefficient(all, all);
}

FormMonomial top_monomial(int m, int n) {
  FormMonomial mono = eta_00_monomial(n);
  const std::uint64_t bits = m >= 64 ? ~std::uint64_t{0} : ((std::uint64_t{1} << m) - 1);
  mono.dz = bits;
  mono.dzbar = bits;
  return mono;
}

BodyExpr chart_integrand(const SuperForm& a) {
  const int m = a.m();
  const BodyExpr top = berezin_top(a.component(top_monomial(m, a.n())));
  if (top.is_zero()) return top;
  // (-2i)^m with the interleaving sign folded in.
  Complex factor = ((m * (m - 1) / 2) & 1) ? -1.0 : 1.0;
  for (int i = 0; i < m; ++i) factor *= Complex(0.0, -2.0);
  return BodyExpr(factor) * top;
}

QuadratureResult integrate_chart(const SuperForm& a, const QuadratureSpec& quad, const OpaqueTable* opaque) {
  const int m = a.m();
  const BodyExpr integrand = chart_integrand(a);
  if (integrand.is_zero()) {
    quad.validate();
    return {};
  }
  const CompiledExpr program(integrand, opaque);
  std::vector<Complex> z(static_cast<std::size_t>(m));
  std::vector<Complex> scratch;
  return integrate_box(
      [&](std::span<const double> x) {
        for (int i = 0; i < m; ++i) {
          z[static_cast<std::size_t>(i)] = {x[static_cast<std::size_t>(2 * i)], x[static_cast<std::size_t>(2 * i + 1)]};
        }
        return program.eval(z, scratch);
      },
      2 * m, quad);
}

TauScalar gaussian_constant(int n) {
  if (n < 1) throw ValidationError("odd-dimension", "gaussian_constant needs n >= 1");
  return two_pi_over_i().pow(n);
}

double gaussian_moment(int k, double tol) {
  QuadratureSpec spec;
  spec.panels = 2;
  spec.nodes = 16;
  spec.tol = tol;
  spec.max_doublings = 8;
  const QuadratureResult r = integrate_real_line(
      [k](double x) { return Complex(std::pow(x, k) * std::exp(-x * x), 0.0); }, spec);
  return r.value.real();
}

double second_moment_check() { return gaussian_moment(2); }

}  // namespace superloc
