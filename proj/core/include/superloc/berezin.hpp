// Copyright 2026 The superloc Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include "superloc/quadrature.hpp"
#include "superloc/superform.hpp"

namespace superloc {

/// Coefficient of xi_1..xi_n xibar_1..xibar_n.
BodyExpr berezin_top(const SuperFunction& f);

/// dz_1..dz_m ^ dzbar_1..dzbar_m ^ dxi_1..dxi_n ^ dxibar_1..dxibar_n.
FormMonomial top_monomial(int m, int n);

/// The body integrand of a form: Berezin top coefficient of its top monomial,
/// times (-1)^{m(m-1)/2} (interleaving dz and dzbar into pairs) and (-2i)^m
/// (dz ^ dzbar = -2i dx ^ dy). Integrating it against dx_1 dy_1 .. dx_m dy_m
/// gives the chart integral.
BodyExpr chart_integrand(const SuperForm& a);

/// Integral of a form over the full body chart C^m.
QuadratureResult integrate_chart(const SuperForm& a, const QuadratureSpec& quad,
                                 const OpaqueTable* opaque = nullptr);

/// (-2 pi i)^n, the value of the Gaussian dg_1 ^ dgbar_1 .. exp(-sum gbar g).
TauScalar gaussian_constant(int n);

/// Integral of x^k exp(-x^2) over the real line by the same quadrature.
double gaussian_moment(int k, double tol = 1e-12);
/// gaussian_moment(2); should equal sqrt(pi)/2.
double second_moment_check();

}  // namespace superloc
