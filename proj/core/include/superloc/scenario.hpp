// Copyright 2026 The superloc Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "superloc/json_io.hpp"
#include "superloc/residue.hpp"

namespace superloc {

/// A chart, a field, a form, its singular points and quadrature settings.
///
/// JSON layout:
///   {"name":..., "m":..., "n":..., "field":{"f":[...],"g":[...]}, "form":[...],
///    "points":[{"z":[[re,im],...], "decomposition":[[{"lambda":[...],"a":[re,im],
///               "b":[re,im],"i_lambda":k}, ...], ...]}],
///    "quad":{"panels":..,"nodes":..,"tol":..,"max_doublings":..,
///             "max_evaluations":..,"map_power":..},
///    "mode":"strict"|"f_zero"|"general", "check_tol":..., "count_xibar":false}
struct Scenario {
  std::string name;
  int m = 0;
  int n = 0;
  SuperVectorField field;
  SuperForm form;
  std::vector<SingularPoint> points;
  std::vector<std::optional<Decomposition>> decompositions;
  QuadratureSpec quad;
  HypothesisMode mode = HypothesisMode::kStrict;
  double check_tol = 1e-6;
  bool count_xibar = false;

  LocalizationInput localization_input() const;
};

/// Parses and validates (field parity and holomorphy, point coordinates,
/// g(p) = 0, decomposition reconstruction).
Scenario scenario_from_json(const json& j);
Scenario load_scenario(const std::filesystem::path& path);

json report_to_json(const LocalizationReport& rep);

}  // namespace superloc
