// Copyright 2026 The superloc Authors
// SPDX-License-Identifier: Apache-2.0

#include "cli.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <iomanip>
#include <optional>

#include "superloc/error.hpp"
#include "superloc/identities.hpp"
#include "superloc/scenario.hpp"

namespace superloc::cli {

namespace {

struct Flags {
  std::string scenario;
  int point = 0;
  std::optional<double> tol;
  std::optional<std::string> mode;
  bool pretty = false;
  bool count_xibar = false;
  double tol_scale = 1.0;
  std::string inject_fault;
};

void emit(std::ostream& out, const json& j, bool pretty) { out << (pretty ? j.dump(2) : j.dump()) << '\n'; }

json error_json(int code, const std::string& kind, const std::string& invariant, const std::string& message) {
  return {{"error", {{"code", code}, {"kind", kind}, {"invariant", invariant}, {"message", message}}}};
}

json tau_json(const TauScalar& t) { return {{"coeff", complex_to_json(t.coeff)}, {"tau", t.tau}}; }

json hypothesis_json(const HypothesisReport& h) {
  return {{"checked", h.checked}, {"satisfied", h.satisfied}, {"detail", h.detail}};
}

Scenario load(const Flags& f) {
  if (f.scenario.empty()) throw ValidationError("scenario-file", "--scenario is required");
  Scenario s = load_scenario(f.scenario);
  if (f.count_xibar) s.count_xibar = true;
  if (f.mode) s.mode = parse_mode(*f.mode);
  return s;
}

const SingularPoint& pick_point(const Scenario& s, int idx) {
  if (idx < 0 || idx >= static_cast<int>(s.points.size())) {
    throw ValidationError("point-index", "point index " + std::to_string(idx) + " outside 0.." +
                                             std::to_string(static_cast<int>(s.points.size()) - 1));
  }
  return s.points[static_cast<std::size_t>(idx)];
}

json residue_json(const Scenario& s, int idx, const ResidueResult& r, HypothesisMode mode) {
  return {{"scenario", s.name},
          {"point", idx},
          {"mode", to_string(mode)},
          {"residue", complex_to_json(r.complex())},
          {"exact", tau_json(r.value)},
          {"det_jv", complex_to_json(r.det_jv.value())},
          {"hypothesis", hypothesis_json(r.hypothesis)}};
}

ResidueResult general_residue(const Scenario& s, int idx, const ResidueOptions& opts) {
  const auto& p = pick_point(s, idx);
  const auto& dec = s.decompositions[static_cast<std::size_t>(idx)];
  if (!dec) throw ValidationError("decomposition-missing", "point " + std::to_string(idx) + " has no decomposition");
  return residue_general(s.field, s.form, p, *dec, opts);
}

int cmd_residue(const Flags& f, std::ostream& out) {
  const Scenario s = load(f);
  ResidueOptions opts;
  opts.count_xibar = s.count_xibar;
  const ResidueResult r = s.mode == HypothesisMode::kGeneral
                              ? general_residue(s, f.point, opts)
                              : residue_simple(s.field, s.form, pick_point(s, f.point), s.mode, opts);
  emit(out, residue_json(s, f.point, r, s.mode), f.pretty);
  return 0;
}

int cmd_residue_general(const Flags& f, std::ostream& out) {
  const Scenario s = load(f);
  ResidueOptions opts;
  opts.count_xibar = s.count_xibar;
  emit(out, residue_json(s, f.point, general_residue(s, f.point, opts), HypothesisMode::kGeneral), f.pretty);
  return 0;
}

int cmd_berezinian(const Flags& f, std::ostream& out) {
  const Scenario s = load(f);
  const auto& p = pick_point(s, f.point);
  const GrassmannValue ber = berezinian_of_field(s.field, p.z);
  const SuperJacobian jac = super_jacobian(s.field, p.z);
  const GrassmannValue det_d = even_det(jac.d);
  json j = {{"scenario", s.name},
            {"point", f.point},
            {"berezinian", grassmann_to_json(ber)},
            {"det_d", grassmann_to_json(det_d)},
            {"ber_det_d_body", complex_to_json(gr_mul(ber, det_d).body())}};
  if (s.field.theorem_mode()) j["det_jv"] = complex_to_json(jacobian_det(s.field, p).value());
  emit(out, j, f.pretty);
  return 0;
}

int cmd_integrate(const Flags& f, std::ostream& out) {
  Scenario s = load(f);
  if (f.tol) s.quad.tol = *f.tol;
  s.quad.validate();
  const QuadratureResult q = integrate_chart(s.form, s.quad);
  emit(out,
       {{"scenario", s.name},
        {"integral", complex_to_json(q.value)},
        {"panels", q.panels},
        {"last_change", q.last_change},
        {"evaluations", q.evaluations}},
       f.pretty);
  return 0;
}

int cmd_check(const Flags& f, std::ostream& out) {
  Scenario s = load(f);
  if (f.tol) {
    if (!(*f.tol > 0.0)) throw ValidationError("check-tolerance", "--tol must be positive");
    s.check_tol = *f.tol;
  }
  const LocalizationReport rep = check_localization(s.localization_input());
  json j = report_to_json(rep);
  j["scenario"] = s.name;
  j["tol"] = s.check_tol;
  emit(out, j, f.pretty);
  return rep.pass ? 0 : kExitCheckFailed;
}

int cmd_selftest(const Flags& f, std::ostream& out) {
  SelftestOptions opts;
  opts.tol_scale = f.tol_scale;
  opts.inject_fault = f.inject_fault;
  const auto checks = run_identity_suite(opts);
  const bool all = std::all_of(checks.begin(), checks.end(), [](const IdentityCheck& c) { return c.pass; });
  if (f.pretty) {
    std::size_t width = 0;
    for (const auto& c : checks) width = std::max(width, c.name.size());
    for (const auto& c : checks) {
      out << (c.pass ? "PASS  " : "FAIL  ") << std::left << std::setw(static_cast<int>(width)) << c.name << "  "
          << std::fixed << std::setprecision(3) << c.seconds << "s";
      if (!c.pass) out << "  " << c.detail;
      out << '\n';
    }
    out << (all ? "all identities hold" : "identity failures") << '\n';
  } else {
    json list = json::array();
    for (const auto& c : checks) {
      list.push_back({{"name", c.name}, {"pass", c.pass}, {"seconds", c.seconds}, {"detail", c.detail}});
    }
    emit(out, {{"checks", list}, {"pass", all}}, false);
  }
  return all ? 0 : static_cast<int>(ErrorKind::kValidation);
}

void add_scenario_flags(CLI::App* sub, Flags& f, bool with_point, bool with_mode) {
  sub->add_option("--scenario", f.scenario, "Scenario JSON file")->required();
  if (with_point) sub->add_option("--point", f.point, "Singular point index")->capture_default_str();
  if (with_mode) {
    sub->add_option("--mode", f.mode, "Hypothesis mode")->check(CLI::IsMember({"strict", "f_zero", "general"}));
  }
  sub->add_flag("--count-xibar", f.count_xibar, "Count xibar variables in the parity hypothesis");
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Residues and chart integrals of superforms on complex supermanifolds", "superloc"};
  Flags f;
  bool json_flag = false;
  app.add_flag("--json", json_flag, "Compact JSON output (default)");
  app.add_flag("--pretty", f.pretty, "Indented JSON output; a table for selftest");
  app.require_subcommand(1);

  auto* residue = app.add_subcommand("residue", "Residue at a singular point");
  add_scenario_flags(residue, f, true, true);
  auto* general = app.add_subcommand("residue-general", "Residue with the decomposition correction");
  add_scenario_flags(general, f, true, false);
  auto* ber = app.add_subcommand("berezinian", "Berezinian of the field's super-Jacobian at a point");
  add_scenario_flags(ber, f, true, false);
  auto* integrate = app.add_subcommand("integrate", "Integral of the form over the body chart");
  add_scenario_flags(integrate, f, false, false);
  integrate->add_option("--tol", f.tol, "Quadrature convergence tolerance");
  auto* check = app.add_subcommand("check", "Compare the residue sum with the chart integral");
  add_scenario_flags(check, f, false, true);
  check->add_option("--tol", f.tol, "Allowed |sum - integral|");
  auto* selftest = app.add_subcommand("selftest", "Run the algebraic identity suite");
  selftest->add_option("--tol-scale", f.tol_scale, "Multiply every identity tolerance")->capture_default_str();
  selftest->add_option("--inject-fault", f.inject_fault, "Flip the sign inside the named identity");

  for (auto* sub : {residue, general, ber, integrate, check, selftest}) {
    sub->add_flag("--json", json_flag, "Compact JSON output (default)");
    sub->add_flag("--pretty", f.pretty, "Indented JSON output; a table for selftest");
  }

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return 0;
  } catch (const CLI::ParseError& e) {
    emit(err, error_json(1, "validation", "cli-arguments", e.what()), false);
    return 1;
  }
  if (json_flag) f.pretty = false;

  try {
    if (residue->parsed()) return cmd_residue(f, out);
    if (general->parsed()) return cmd_residue_general(f, out);
    if (ber->parsed()) return cmd_berezinian(f, out);
    if (integrate->parsed()) return cmd_integrate(f, out);
    if (check->parsed()) return cmd_check(f, out);
    if (selftest->parsed()) return cmd_selftest(f, out);
  } catch (const Error& e) {
    const int code = static_cast<int>(e.kind());
    emit(err, error_json(code, to_string(e.kind()), e.invariant(), e.what()), false);
    return code;
  } catch (const std::exception& e) {
    emit(err, error_json(1, "validation", "internal", e.what()), false);
    return 1;
  }
  return 1;
}

}  // namespace superloc::cli
