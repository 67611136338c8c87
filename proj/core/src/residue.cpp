// Copyright 2026 The superloc Authors
// SPDX-License-Identifier: Apache-2.0

#include "superloc/residue.hpp"

#include <algorithm>
#include <numeric>

#include "superloc/error.hpp"

namespace superloc {

const char* to_string(HypothesisMode mode) {
  switch (mode) {
    case HypothesisMode::kStrict: return "strict";
    case HypothesisMode::kFZero: return "f_zero";
    case HypothesisMode::kGeneral: return "general";
  }
  return "unknown";
}

HypothesisMode parse_mode(const std::string& s) {
  if (s == "strict") return HypothesisMode::kStrict;
  if (s == "f_zero") return HypothesisMode::kFZero;
  if (s == "general") return HypothesisMode::kGeneral;
  throw ValidationError("mode", "unknown mode '" + s + "' (expected strict, f_zero or general)");
}

namespace {

void require_square_chart(const SuperVectorField& v) {
  if (v.m() != v.n()) {
    throw ValidationError("equal-dimensions", "residue formulas need a chart with m == n");
  }
}

void require_theorem_mode(const SuperVectorField& v) {
  if (!v.theorem_mode()) {
    throw ValidationError("theorem-mode", "every g_j must be free of odd variables");
  }
}

// Leibniz over exact scalars for small n; LU over complex numbers above.
TauScalar scalar_det(const std::vector<std::vector<TauScalar>>& a) {
  const std::size_t n = a.size();
  if (n == 0) return TauScalar{1.0};
  if (n <= 6) {
    std::vector<std::size_t> perm(n);
    std::iota(perm.begin(), perm.end(), 0);
    TauScalar det{};
    do {
      int inversions = 0;
      for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = i + 1; j < n; ++j)
          if (perm[i] > perm[j]) ++inversions;
      TauScalar prod{(inversions & 1) ? -1.0 : 1.0};
      for (std::size_t i = 0; i < n && !prod.is_zero(); ++i) prod = prod * a[i][perm[i]];
      det = det + prod;
    } while (std::next_permutation(perm.begin(), perm.end()));
    return det;
  }
  std::vector<std::vector<Complex>> lu(n, std::vector<Complex>(n));
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) lu[i][j] = a[i][j].value();
  Complex det = 1.0;
  for (std::size_t c = 0; c < n; ++c) {
    std::size_t piv = c;
    for (std::size_t r = c + 1; r < n; ++r)
      if (std::abs(lu[r][c]) > std::abs(lu[piv][c])) piv = r;
    if (lu[piv][c] == Complex{}) return TauScalar{};
    if (piv != c) {
      std::swap(lu[piv], lu[c]);
      det = -det;
    }
    det *= lu[c][c];
    for (std::size_t r = c + 1; r < n; ++r) {
      const Complex f = lu[r][c] / lu[c][c];
      for (std::size_t k = c; k < n; ++k) lu[r][k] -= f * lu[c][k];
    }
  }
  return TauScalar(det);
}

void require_nondegenerate(const TauScalar& det) {
  if (det.is_zero() || std::abs(det.value()) < 1e-14) {
    throw MathDomainError("nondegenerate-singularity", "degenerate singularity: det(JV)(p) = 0");
  }
}

TauScalar top_numerator(const SuperForm& eta, const SingularPoint& p, const OpaqueTable* opaque) {
  const MultiIndex top = MultiIndex::full(eta.n());
  return eta_00_nn(eta, top, top).eval(p.z, opaque) + eta_10_hat_star(eta, top, top).eval(p.z, opaque);
}

void check_mode(const SuperVectorField& v, const SuperForm& eta, HypothesisMode mode, const ResidueOptions& opts,
                HypothesisReport& report) {
  switch (mode) {
    case HypothesisMode::kStrict:
      report = check_parity_hypothesis(eta, opts.count_xibar);
      if (!report.satisfied) throw ValidationError("parity-hypothesis", report.detail);
      break;
    case HypothesisMode::kFZero:
      if (!v.f_vanishes()) throw ValidationError("f-zero", "f_zero mode requires every f_i to vanish");
      report.checked = false;
      report.detail = "parity hypothesis skipped (f = 0)";
      break;
    case HypothesisMode::kGeneral:
      throw ValidationError("mode", "general mode needs a decomposition; use residue_general");
  }
}

}  // namespace

void validate_singular_point(const SuperVectorField& v, const SingularPoint& p, double tol) {
  if (static_cast<int>(p.z.size()) != v.m()) {
    throw ValidationError("point-dimension", "singular point needs " + std::to_string(v.m()) + " coordinates");
  }
  for (int j = 1; j <= v.n(); ++j) {
    const Complex gj = v.g(j).body_part().eval(p.z).value();
    if (std::abs(gj) > tol) {
      throw ValidationError("singular-point", "g" + std::to_string(j) + " does not vanish at the point");
    }
  }
}

SuperFunction decomposition_component(const SuperVectorField& v, const Decomposition& dec, int i) {
  const int m = v.m();
  const int n = v.n();
  SuperFunction out(m, n);
  for (const DecompositionEntry& e : dec.at(static_cast<std::size_t>(i - 1))) {
    const SuperFunction xl = SuperFunction::monomial(m, n, e.lambda, {}, 1.0);
    if (e.a != Complex{}) out += xl * v.g(i).scaled(BodyExpr(e.a));
    if (e.b != Complex{}) out += xl * v.g(e.i_lambda).scaled(BodyExpr(e.b));
  }
  return out;
}

void validate_decomposition(const SuperVectorField& v, const Decomposition& dec) {
  require_square_chart(v);
  const int n = v.n();
  if (static_cast<int>(dec.size()) != n) {
    throw ValidationError("decomposition-shape", "decomposition needs one entry list per f_i");
  }
  for (int i = 1; i <= n; ++i) {
    for (const DecompositionEntry& e : dec[static_cast<std::size_t>(i - 1)]) {
      if (e.lambda.max_label() > n || !e.lambda.is_odd()) {
        throw ValidationError("decomposition-odd-lambda", "every lambda must be an odd-length multi-index in 1..n");
      }
      if (e.b != Complex{} && (e.i_lambda < 1 || e.i_lambda > n || e.i_lambda == i)) {
        throw ValidationError("decomposition-index", "i_lambda must lie in 1..n and differ from i");
      }
    }
    const SuperFunction recon = decomposition_component(v, dec, i);
    const double diff = sampled_difference(v.f(i), recon, 4, 20260 + static_cast<unsigned>(i));
    if (diff > 1e-9) {
      throw ValidationError("decomposition-reconstruction",
                            "decomposition does not reproduce f" + std::to_string(i) +
                                "; difference: " + (v.f(i) - recon).to_string());
    }
  }
}

TauScalar jacobian_det(const SuperVectorField& v, const SingularPoint& p) {
  require_square_chart(v);
  require_theorem_mode(v);
  const int n = v.n();
  std::vector<std::vector<TauScalar>> a(static_cast<std::size_t>(n), std::vector<TauScalar>(static_cast<std::size_t>(n)));
  for (int i = 1; i <= n; ++i)
    for (int j = 1; j <= n; ++j)
      a[static_cast<std::size_t>(i - 1)][static_cast<std::size_t>(j - 1)] =
          v.g(i).body_part().diff({j, false}).eval(p.z);
  return scalar_det(a);
}

SuperJacobian super_jacobian(const SuperVectorField& v, std::span<const Complex> z) {
  require_square_chart(v);
  const int n = v.n();
  const int gens = 2 * n;
  SuperJacobian J{GrassmannMatrix(n, n, gens), GrassmannMatrix(n, n, gens), GrassmannMatrix(n, n, gens),
                  GrassmannMatrix(n, n, gens)};
  for (int r = 1; r <= n; ++r) {
    for (int c = 1; c <= n; ++c) {
      J.a.at(r - 1, c - 1) = v.g(c).d_z(r).eval(z);
      J.b.at(r - 1, c - 1) = v.f(c).d_z(r).eval(z);
      J.c.at(r - 1, c - 1) = v.g(c).d_xi(r).eval(z);
      J.d.at(r - 1, c - 1) = v.f(c).d_xi(r).eval(z);
    }
  }
  return J;
}

GrassmannValue berezinian_of_field(const SuperVectorField& v, std::span<const Complex> z) {
  const SuperJacobian J = super_jacobian(v, z);
  return berezinian(J.a, J.b, J.c, J.d);
}

HypothesisReport check_parity_hypothesis(const SuperForm& eta, bool count_xibar) {
  const int n = eta.n();
  HypothesisReport report;
  report.checked = true;
  auto scan = [&](const FormMonomial& mono) {
    const SuperFunction comp = eta.component(mono);
    for (const auto& [k, e] : comp.terms()) {
      const int count = k.xi.size() + (count_xibar ? k.xibar.size() : 0);
      if ((count & 1) != (n & 1)) {
        report.satisfied = false;
        report.detail = "component " + mono.to_string() + " has a term with " + std::to_string(count) +
                        (count_xibar ? " odd variables" : " xi variables") + " but n = " + std::to_string(n);
        return;
      }
    }
  };
  scan(eta_00_monomial(n));
  for (int j = 1; j <= n && report.satisfied; ++j) scan(eta_10_monomial(n, j));
  if (report.satisfied) report.detail = "parity hypothesis holds";
  return report;
}

ResidueResult residue_simple(const SuperVectorField& v, const SuperForm& eta, const SingularPoint& p,
                             HypothesisMode mode, const ResidueOptions& opts) {
  require_square_chart(v);
  require_theorem_mode(v);
  validate_singular_point(v, p);
  ResidueResult r;
  check_mode(v, eta, mode, opts, r.hypothesis);
  r.det_jv = jacobian_det(v, p);
  require_nondegenerate(r.det_jv);
  r.value = two_pi_over_i().pow(v.n()) * top_numerator(eta, p, opts.opaque) / r.det_jv;
  return r;
}

Complex residue_ber(const SuperVectorField& v, const SuperForm& eta, const SingularPoint& p, HypothesisMode mode,
                    const ResidueOptions& opts) {
  require_square_chart(v);
  require_theorem_mode(v);
  validate_singular_point(v, p);
  HypothesisReport report;
  check_mode(v, eta, mode, opts, report);
  require_nondegenerate(jacobian_det(v, p));
  const SuperJacobian J = super_jacobian(v, p.z);
  const GrassmannValue ber = berezinian(J.a, J.b, J.c, J.d);
  const Complex denom = (ber * even_det(J.d)).body();
  return (two_pi_over_i().pow(v.n()) * top_numerator(eta, p, opts.opaque)).value() / denom;
}

ResidueResult residue_general(const SuperVectorField& v, const SuperForm& eta, const SingularPoint& p,
                              const Decomposition& dec, const ResidueOptions& opts) {
  require_square_chart(v);
  require_theorem_mode(v);
  validate_singular_point(v, p);
  validate_decomposition(v, dec);
  ResidueResult r;
  r.hypothesis.detail = "parity hypothesis not required";
  r.det_jv = jacobian_det(v, p);
  require_nondegenerate(r.det_jv);
  const int n = v.n();
  const MultiIndex top = MultiIndex::full(n);
  TauScalar numer = top_numerator(eta, p, opts.opaque);
  for (const auto& entries : dec) {
    for (const DecompositionEntry& e : entries) {
      if (e.a == Complex{}) continue;
      const MultiIndex mu = MultiIndex::from_bits(top.bits() ^ e.lambda.bits());
      const TauScalar diff =
          eta_10_hat_star(eta, mu, top).eval(p.z, opts.opaque) - eta_00_nn(eta, mu, top).eval(p.z, opts.opaque);
      numer = numer + TauScalar(e.a) * diff;
    }
  }
  r.value = two_pi_over_i().pow(n) * numer / r.det_jv;
  return r;
}

std::optional<bool> is_closed(const SuperVectorField& v, const SuperForm& eta, const OpaqueTable* opaque,
                              double tol) {
  const SuperForm d = dbar(eta) + contract(v, eta);
  if (d.is_zero()) return true;
  try {
    return sampled_magnitude(d, 4, 7919, opaque) < tol;
  } catch (const Error& e) {
    if (e.invariant() == "opaque-evaluator") return std::nullopt;
    throw;
  }
}

LocalizationReport check_localization(const LocalizationInput& in) {
  if (!in.field || !in.eta) throw ValidationError("localization-input", "field and form are required");
  LocalizationReport rep;
  TauScalar sum{};
  for (std::size_t k = 0; k < in.points.size(); ++k) {
    ResidueResult r;
    if (in.mode == HypothesisMode::kGeneral) {
      if (k >= in.decompositions.size() || !in.decompositions[k]) {
        throw ValidationError("decomposition-required", "general mode needs a decomposition for every point");
      }
      r = residue_general(*in.field, *in.eta, in.points[k], *in.decompositions[k], in.options);
    } else {
      r = residue_simple(*in.field, *in.eta, in.points[k], in.mode, in.options);
    }
    sum = sum + r.value;
    rep.residues.push_back(r);
  }
  rep.sum = sum.value();
  rep.integral = integrate_chart(*in.eta, in.quad, in.options.opaque);
  rep.abs_diff = std::abs(rep.sum - rep.integral.value);
  rep.pass = rep.abs_diff < in.tol;
  rep.closed = is_closed(*in.field, *in.eta, in.options.opaque);
  return rep;
}

ResidueResult dh_residues(const SuperVectorField& v, const SuperForm& omega, const SuperFunction& g, double s,
                          const SingularPoint& p, const DegreeCaps& caps, HypothesisMode mode,
                          const Decomposition* dec, const ResidueOptions& opts) {
  const std::optional<bool> closed = is_closed(v, omega, opts.opaque);
  if (!closed.value_or(false)) {
    throw ValidationError("dh-closed", "(dbar + i_V) omega does not vanish");
  }
  const SuperForm moment = contract(v, omega) - dbar(SuperForm::function(g));
  if (!moment.is_zero() && sampled_magnitude(moment, 4, 104729, opts.opaque) > 1e-9) {
    throw ValidationError("dh-moment", "i_V omega differs from dbar g");
  }
  const SuperForm eta = form_exp_truncated(omega - SuperForm::function(g).scaled(BodyExpr(s)), caps);
  if (mode == HypothesisMode::kGeneral) {
    if (!dec) throw ValidationError("decomposition-required", "general mode needs a decomposition");
    return residue_general(v, eta, p, *dec, opts);
  }
  return residue_simple(v, eta, p, mode, opts);
}

}  // namespace superloc
