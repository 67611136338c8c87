// Copyright 2026 The superloc Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <string>
#include <vector>

#include "superloc/residue.hpp"

namespace superloc {

struct SelftestOptions {
  /// Multiplies every comparison tolerance.
  double tol_scale = 1.0;
  /// Name of a check whose computed side gets its sign flipped, to prove the
  /// harness notices. Empty for a normal run.
  std::string inject_fault;
};

struct IdentityCheck {
  std::string name;
  bool pass = false;
  std::string detail;
  double seconds = 0.0;
};

/// Names of all checks in run order.
std::vector<std::string> identity_names();
/// Runs every check. An unknown inject_fault name is a ValidationError.
std::vector<IdentityCheck> run_identity_suite(const SelftestOptions& opts = {});
/// Runs a single named check.
IdentityCheck run_identity(const std::string& name, const SelftestOptions& opts = {});

// Builders shared by the suite, tests and benchmarks.

/// g_i = sum_j a_ij z_j with small Gaussian-integer a_ij and det(a) != 0.
std::vector<SuperFunction> random_linear_g(int n, unsigned seed);
/// A theorem-mode field with the given g and random odd holomorphic f.
SuperVectorField random_theorem_field(const std::vector<SuperFunction>& g, unsigned seed, bool with_f = true);
/// sum dz_i conj(g_i) (+ sum dxi_i conj(g_i) when with_odd).
SuperForm localizing_form(const std::vector<SuperFunction>& g, bool with_even = true, bool with_odd = true);
/// A random form with polynomial/rational coefficients on an (m|n) chart.
SuperForm random_form(int m, int n, unsigned seed, int terms = 3);
/// A random superfunction with polynomial/rational coefficients.
SuperFunction random_superfunction(int m, int n, unsigned seed, int terms = 3);

}  // namespace superloc
