// Copyright 2026 The superloc Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <optional>
#include <string>
#include <vector>

#include "superloc/berezin.hpp"
#include "superloc/grassmann.hpp"
#include "superloc/superform.hpp"

namespace superloc {

enum class HypothesisMode { kStrict, kFZero, kGeneral };

const char* to_string(HypothesisMode mode);
HypothesisMode parse_mode(const std::string& s);

struct SingularPoint {
  std::vector<Complex> z;
  int chart = 0;
};

/// Checks g_j(p) = 0 for every j (|g_j(p)| <= tol) and that p has m entries.
void validate_singular_point(const SuperVectorField& v, const SingularPoint& p, double tol = 1e-12);

/// One summand xi_lambda (a g_i + b g_{i_lambda}) of f_i.
struct DecompositionEntry {
  MultiIndex lambda;
  Complex a;
  Complex b;
  int i_lambda = 0;
};
/// Entry lists for f_1..f_n.
using Decomposition = std::vector<std::vector<DecompositionEntry>>;

/// The superfunction a decomposition describes for component i.
SuperFunction decomposition_component(const SuperVectorField& v, const Decomposition& dec, int i);
/// Throws ValidationError("decomposition-reconstruction") when some f_i is
/// not reproduced (compared at seeded random points).
void validate_decomposition(const SuperVectorField& v, const Decomposition& dec);

/// det(dg_i/dz_j)(p); requires theorem mode.
TauScalar jacobian_det(const SuperVectorField& v, const SingularPoint& p);

/// Blocks A = dg/dz, B = df/dz, C = dg/dxi, D = df/dxi at a body point
/// (rows indexed by the coordinate, columns by the component).
struct SuperJacobian {
  GrassmannMatrix a;
  GrassmannMatrix b;
  GrassmannMatrix c;
  GrassmannMatrix d;
};
SuperJacobian super_jacobian(const SuperVectorField& v, std::span<const Complex> z);
GrassmannValue berezinian_of_field(const SuperVectorField& v, std::span<const Complex> z);

struct HypothesisReport {
  bool checked = false;
  bool satisfied = true;
  std::string detail;
};

/// Whether the (0,0)|(n,n) and hatted (1,0)|(n-1,n) components contain only
/// expansion terms whose xi count has the parity of n. With count_xibar the
/// xibar variables are counted too.
HypothesisReport check_parity_hypothesis(const SuperForm& eta, bool count_xibar = false);

struct ResidueOptions {
  bool count_xibar = false;
  const OpaqueTable* opaque = nullptr;
};

struct ResidueResult {
  TauScalar value;
  TauScalar det_jv;
  HypothesisReport hypothesis;
  Complex complex() const { return value.value(); }
};

/// (2 pi/i)^n (eta00 + eta10*)(top; top)(p) / det(JV)(p). Mode kStrict
/// enforces the parity hypothesis; kFZero requires every f_i = 0.
ResidueResult residue_simple(const SuperVectorField& v, const SuperForm& eta, const SingularPoint& p,
                             HypothesisMode mode, const ResidueOptions& opts = {});
/// Same quantity with det(JV) replaced by Ber(V) det(D) at p.
Complex residue_ber(const SuperVectorField& v, const SuperForm& eta, const SingularPoint& p, HypothesisMode mode,
                    const ResidueOptions& opts = {});
/// Simple formula plus sum_j sum_lambda a^j_lambda (eta10*(mu; top) - eta00(mu; top)) / det(JV),
/// mu the complement of lambda.
ResidueResult residue_general(const SuperVectorField& v, const SuperForm& eta, const SingularPoint& p,
                              const Decomposition& dec, const ResidueOptions& opts = {});

/// Samples (dbar + i_V) eta. nullopt when an opaque coefficient without an
/// evaluator is involved.
std::optional<bool> is_closed(const SuperVectorField& v, const SuperForm& eta, const OpaqueTable* opaque = nullptr,
                              double tol = 1e-9);

struct LocalizationInput {
  const SuperVectorField* field = nullptr;
  const SuperForm* eta = nullptr;
  std::vector<SingularPoint> points;
  std::vector<std::optional<Decomposition>> decompositions;
  HypothesisMode mode = HypothesisMode::kStrict;
  QuadratureSpec quad;
  double tol = 1e-6;
  ResidueOptions options;
};

struct LocalizationReport {
  std::vector<ResidueResult> residues;
  Complex sum;
  QuadratureResult integral;
  double abs_diff = 0.0;
  bool pass = false;
  std::optional<bool> closed;
};

LocalizationReport check_localization(const LocalizationInput& in);

/// Residue at p of the truncated exp(omega - s g) after checking
/// (dbar + i_V) omega = 0 and i_V omega = dbar g by sampling.
ResidueResult dh_residues(const SuperVectorField& v, const SuperForm& omega, const SuperFunction& g, double s,
                          const SingularPoint& p, const DegreeCaps& caps, HypothesisMode mode,
                          const Decomposition* dec = nullptr, const ResidueOptions& opts = {});

}  // namespace superloc
