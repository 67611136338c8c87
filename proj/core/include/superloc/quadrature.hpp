// Copyright 2026 The superloc Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <functional>
#include <span>
#include <vector>

#include "superloc/tau_scalar.hpp"

namespace superloc {

/// Compactified Gauss-Legendre settings. Each half axis [0, inf) is mapped
/// from [0, 1) by x = t/(1-t)^q (q = map_power, 1 by default) and split into
/// `panels` equal panels with `nodes` points each; panels double until
/// successive estimates differ by less than `tol` (absolute).
///
/// With q = 1 a tensor-product integrand decaying like |x|^-2d in d real
/// dimensions stays O(1) but non-smooth at the far corners of the cube, so
/// convergence drops to second order. q = 2 or 3 pushes the corner
/// behaviour to higher order for algebraically decaying integrands.
struct QuadratureSpec {
  int panels = 4;
  int nodes = 8;
  double tol = 1e-8;
  int max_doublings = 6;
  /// Refuse refinement levels needing more integrand evaluations than this.
  long long max_evaluations = 1LL << 27;
  double map_power = 1.0;

  void validate() const;
};

struct AxisRule {
  std::vector<double> x;
  std::vector<double> w;
};

/// Nodes and weights on [0, inf) (already including the Jacobian).
AxisRule half_line_rule(int panels, int nodes, double map_power = 1.0);
/// Both half axes, ordered from -inf to +inf.
AxisRule full_line_rule(int panels, int nodes, double map_power = 1.0);

struct QuadratureResult {
  Complex value;
  int panels = 0;           // panel count of the accepted estimate
  double last_change = 0.0;  // |I(P) - I(P/2)|
  long long evaluations = 0;
};

using Integrand1 = std::function<Complex(double)>;
using IntegrandN = std::function<Complex(std::span<const double>)>;

/// Integrates over [0, inf).
QuadratureResult integrate_half_line(const Integrand1& f, const QuadratureSpec& spec);
/// Integrates over the real line.
QuadratureResult integrate_real_line(const Integrand1& f, const QuadratureSpec& spec);
/// Tensor-product rule over R^dims. Non-finite integrand values raise
/// MathDomainError; failure to converge raises NonConvergenceError.
QuadratureResult integrate_box(const IntegrandN& f, int dims, const QuadratureSpec& spec);

}  // namespace superloc
