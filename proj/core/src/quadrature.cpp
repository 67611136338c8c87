// Copyright 2026 The superloc Authors
// SPDX-License-Identifier: Apache-2.0

#include "superloc/quadrature.hpp"

#include <gsl/gsl_integration.h>

#include <cmath>
#include <cstdio>
#include <memory>
#include <string>

#include "superloc/error.hpp"

namespace superloc {

void QuadratureSpec::validate() const {
  if (panels < 1 || nodes < 1) throw ValidationError("quadrature-counts", "panels and nodes must be positive");
  if (!(tol > 0.0)) throw ValidationError("quadrature-tolerance", "quadrature tolerance must be positive");
  if (max_doublings < 1) throw ValidationError("quadrature-counts", "max_doublings must be positive");
  if (!(map_power >= 1.0)) throw ValidationError("quadrature-map", "map_power must be at least 1");
}

AxisRule half_line_rule(int panels, int nodes, double map_power) {
  std::unique_ptr<gsl_integration_glfixed_table, decltype(&gsl_integration_glfixed_table_free)> table(
      gsl_integration_glfixed_table_alloc(static_cast<std::size_t>(nodes)), &gsl_integration_glfixed_table_free);
  if (!table) throw ValidationError("quadrature-counts", "cannot build Gauss-Legendre table");
  AxisRule rule;
  const double h = 1.0 / panels;
  for (int p = 0; p < panels; ++p) {
    for (int k = 0; k < nodes; ++k) {
      double t = 0.0;
      double wt = 0.0;
      gsl_integration_glfixed_point(p * h, (p + 1) * h, static_cast<std::size_t>(k), &t, &wt, table.get());
      const double s = 1.0 - t;
      rule.x.push_back(t / std::pow(s, map_power));
      rule.w.push_back(wt * (s + map_power * t) / std::pow(s, map_power + 1.0));
    }
  }
  return rule;
}

AxisRule full_line_rule(int panels, int nodes, double map_power) {
  const AxisRule half = half_line_rule(panels, nodes, map_power);
  AxisRule rule;
  for (std::size_t k = half.x.size(); k-- > 0;) {
    rule.x.push_back(-half.x[k]);
    rule.w.push_back(half.w[k]);
  }
  rule.x.insert(rule.x.end(), half.x.begin(), half.x.end());
  rule.w.insert(rule.w.end(), half.w.begin(), half.w.end());
  return rule;
}

namespace {

Complex checked(Complex v) {
  if (!std::isfinite(v.real()) || !std::isfinite(v.imag())) {
    throw MathDomainError("finite-integrand", "integrand is not finite at a quadrature node");
  }
  return v;
}

// Pairwise reduction keeps the summation order fixed and the rounding small.
Complex pairwise_sum(std::span<const Complex> v) {
  if (v.size() <= 8) {
    Complex s{};
    for (const Complex& c : v) s += c;
    return s;
  }
  const std::size_t half = v.size() / 2;
  return pairwise_sum(v.first(half)) + pairwise_sum(v.subspan(half));
}

Complex tensor_sum(const IntegrandN& f, int dims, const AxisRule& rule) {
  const std::size_t k = rule.x.size();
  if (dims == 0) {
    return checked(f({}));
  }
  std::vector<double> point(static_cast<std::size_t>(dims));
  std::vector<Complex> outer(k);
  std::vector<std::size_t> idx(static_cast<std::size_t>(dims), 0);
  for (std::size_t a = 0; a < k; ++a) {
    Complex acc{};
    idx.assign(idx.size(), 0);
    idx[0] = a;
    // Odometer over the inner axes.
    while (true) {
      double w = 1.0;
      for (int d = 0; d < dims; ++d) {
        point[static_cast<std::size_t>(d)] = rule.x[idx[static_cast<std::size_t>(d)]];
        w *= rule.w[idx[static_cast<std::size_t>(d)]];
      }
      acc += w * checked(f(point));
      int d = dims - 1;
      while (d >= 1 && ++idx[static_cast<std::size_t>(d)] == k) idx[static_cast<std::size_t>(d--)] = 0;
      if (d < 1) break;
    }
    outer[a] = acc;
  }
  return pairwise_sum(outer);
}

QuadratureResult refine(const std::function<Complex(int panels)>& estimate, const std::function<long long(int)>& cost,
                        const QuadratureSpec& spec) {
  spec.validate();
  int panels = spec.panels;
  QuadratureResult r;
  r.evaluations = cost(panels);
  Complex prev = estimate(panels);
  for (int level = 0; level < spec.max_doublings; ++level) {
    panels *= 2;
    const long long c = cost(panels);
    if (c > spec.max_evaluations) break;
    r.evaluations += c;
    const Complex cur = estimate(panels);
    r.last_change = std::abs(cur - prev);
    r.panels = panels;
    r.value = cur;
    if (r.last_change < spec.tol) return r;
    prev = cur;
  }
  char msg[160];
  std::snprintf(msg, sizeof msg, "quadrature did not reach tolerance %.3g (last change %.3g at %d panels)", spec.tol,
                r.last_change, r.panels);
  throw NonConvergenceError("quadrature-convergence", msg);
}

}  // namespace

QuadratureResult integrate_half_line(const Integrand1& f, const QuadratureSpec& spec) {
  return refine(
      [&](int panels) {
        const AxisRule rule = half_line_rule(panels, spec.nodes, spec.map_power);
        std::vector<Complex> terms(rule.x.size());
        for (std::size_t k = 0; k < rule.x.size(); ++k) terms[k] = rule.w[k] * checked(f(rule.x[k]));
        return pairwise_sum(terms);
      },
      [&](int panels) { return static_cast<long long>(panels) * spec.nodes; }, spec);
}

QuadratureResult integrate_real_line(const Integrand1& f, const QuadratureSpec& spec) {
  return integrate_box([&](std::span<const double> x) { return f(x[0]); }, 1, spec);
}

QuadratureResult integrate_box(const IntegrandN& f, int dims, const QuadratureSpec& spec) {
  if (dims < 0) throw ValidationError("quadrature-dimension", "negative integration dimension");
  if (dims == 0) {
    QuadratureResult r;
    r.value = checked(f({}));
    r.evaluations = 1;
    return r;
  }
  return refine([&](int panels) { return tensor_sum(f, dims, full_line_rule(panels, spec.nodes, spec.map_power)); },
                [&](int panels) {
                  const double per_axis = 2.0 * panels * spec.nodes;
                  const double total = std::pow(per_axis, dims);
                  return total > 9e18 ? static_cast<long long>(9e18) : static_cast<long long>(total);
                },
                spec);
}

}  // namespace superloc
