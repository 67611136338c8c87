// Copyright 2026 The superloc Authors
// SPDX-License-Identifier: Apache-2.0

#include "superloc/scenario.hpp"

#include <fstream>

#include "superloc/error.hpp"

namespace superloc {

namespace {

int read_dim(const json& j, const char* key) {
  if (!j.contains(key) || !j.at(key).is_number_integer() || j.at(key).get<int>() < 0) {
    throw ValidationError("scenario-schema", std::string("scenario needs a non-negative integer '") + key + "'");
  }
  return j.at(key).get<int>();
}

Decomposition read_decomposition(const json& j, int n) {
  if (!j.is_array() || static_cast<int>(j.size()) != n) {
    throw ValidationError("decomposition-shape", "decomposition needs one entry list per f_i");
  }
  Decomposition dec;
  for (const auto& list : j) {
    if (!list.is_array()) throw ValidationError("scenario-schema", "decomposition entries must be lists");
    std::vector<DecompositionEntry> entries;
    for (const auto& e : list) {
      DecompositionEntry d;
      if (!e.contains("lambda")) throw ValidationError("scenario-schema", "decomposition entry needs lambda");
      d.lambda = MultiIndex::from_labels(e.at("lambda").get<std::vector<int>>(), n);
      d.a = e.contains("a") ? complex_from_json(e.at("a")) : Complex{};
      d.b = e.contains("b") ? complex_from_json(e.at("b")) : Complex{};
      d.i_lambda = e.contains("i_lambda") ? e.at("i_lambda").get<int>() : 0;
      entries.push_back(d);
    }
    dec.push_back(std::move(entries));
  }
  return dec;
}

}  // namespace

LocalizationInput Scenario::localization_input() const {
  LocalizationInput in;
  in.field = &field;
  in.eta = &form;
  in.points = points;
  in.decompositions = decompositions;
  in.mode = mode;
  in.quad = quad;
  in.tol = check_tol;
  in.options.count_xibar = count_xibar;
  return in;
}

Scenario scenario_from_json(const json& j) {
  if (!j.is_object()) throw ValidationError("scenario-schema", "scenario must be a JSON object");
  try {
    const int m = read_dim(j, "m");
    const int n = read_dim(j, "n");
    if (!j.contains("field")) throw ValidationError("scenario-schema", "scenario needs a field");
    if (!j.contains("form")) throw ValidationError("scenario-schema", "scenario needs a form");
    Scenario s{j.value("name", std::string{}), m, n, field_from_json(j.at("field"), m, n),
               form_from_json(j.at("form"), m, n), {}, {}, {}, HypothesisMode::kStrict, 1e-6, false};
    if (j.contains("quad")) {
      const json& q = j.at("quad");
      s.quad.panels = q.value("panels", s.quad.panels);
      s.quad.nodes = q.value("nodes", s.quad.nodes);
      s.quad.tol = q.value("tol", s.quad.tol);
      s.quad.max_doublings = q.value("max_doublings", s.quad.max_doublings);
      s.quad.max_evaluations = q.value("max_evaluations", s.quad.max_evaluations);
      s.quad.map_power = q.value("map_power", s.quad.map_power);
    }
    s.quad.validate();
    if (j.contains("mode")) s.mode = parse_mode(j.at("mode").get<std::string>());
    s.check_tol = j.value("check_tol", s.check_tol);
    s.count_xibar = j.value("count_xibar", false);
    if (!(s.check_tol > 0.0)) throw ValidationError("check-tolerance", "check_tol must be positive");
    if (j.contains("points")) {
      for (const auto& p : j.at("points")) {
        SingularPoint sp;
        if (!p.contains("z") || !p.at("z").is_array()) throw ValidationError("scenario-schema", "point needs z");
        for (const auto& c : p.at("z")) sp.z.push_back(complex_from_json(c));
        sp.chart = p.value("chart", 0);
        validate_singular_point(s.field, sp);
        std::optional<Decomposition> dec;
        if (p.contains("decomposition")) {
          dec = read_decomposition(p.at("decomposition"), n);
          validate_decomposition(s.field, *dec);
        }
        s.points.push_back(std::move(sp));
        s.decompositions.push_back(std::move(dec));
      }
    }
    return s;
  } catch (const json::exception& e) {
    throw ValidationError("scenario-schema", e.what());
  }
}

Scenario load_scenario(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ValidationError("scenario-file", "cannot open scenario " + path.string());
  json j;
  try {
    j = json::parse(in);
  } catch (const json::parse_error& e) {
    throw ValidationError("scenario-json", std::string("malformed JSON: ") + e.what());
  }
  Scenario s = scenario_from_json(j);
  if (s.name.empty()) s.name = path.stem().string();
  return s;
}

json report_to_json(const LocalizationReport& rep) {
  json residues = json::array();
  for (const auto& r : rep.residues) residues.push_back(complex_to_json(r.complex()));
  json out = {{"residues", residues},
              {"sum", complex_to_json(rep.sum)},
              {"integral", complex_to_json(rep.integral.value)},
              {"abs_diff", rep.abs_diff},
              {"pass", rep.pass},
              {"quadrature", {{"panels", rep.integral.panels},
                              {"last_change", rep.integral.last_change},
                              {"evaluations", rep.integral.evaluations}}}};
  out["closed"] = rep.closed ? json(*rep.closed) : json(nullptr);
  return out;
}

}  // namespace superloc
