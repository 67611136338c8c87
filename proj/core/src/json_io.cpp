// Copyright 2026 The superloc Authors
// SPDX-License-Identifier: Apache-2.0

#include "superloc/json_io.hpp"

#include <algorithm>

#include "superloc/error.hpp"

namespace superloc {

namespace {

[[noreturn]] void schema_error(const std::string& what) { throw ValidationError("scenario-schema", what); }

const json& member(const json& j, const char* key) {
  if (!j.is_object() || !j.contains(key)) schema_error(std::string("missing field '") + key + "'");
  return j.at(key);
}

int as_int(const json& j, const char* what) {
  if (!j.is_number_integer()) schema_error(std::string(what) + " must be an integer");
  return j.get<int>();
}

std::vector<int> int_list(const json& j, const char* what) {
  if (!j.is_array()) schema_error(std::string(what) + " must be a list of integers");
  std::vector<int> out;
  for (const auto& x : j) out.push_back(as_int(x, what));
  return out;
}

// Sorts labels, returning the permutation sign (0 on repeats).
int sort_labels(std::vector<int>& labels) {
  int sign = 1;
  for (std::size_t i = 1; i < labels.size(); ++i) {
    for (std::size_t k = i; k > 0 && labels[k] < labels[k - 1]; --k) {
      std::swap(labels[k], labels[k - 1]);
      sign = -sign;
    }
  }
  if (std::adjacent_find(labels.begin(), labels.end()) != labels.end()) return 0;
  return sign;
}

Var parse_var(const std::string& s, int m) {
  Var v;
  std::size_t pos = 0;
  if (s.rfind("zb", 0) == 0) {
    v.conj = true;
    pos = 2;
  } else if (s.rfind("z", 0) == 0) {
    pos = 1;
  } else {
    schema_error("unknown variable '" + s + "'");
  }
  const std::string digits = s.substr(pos);
  if (digits.empty() || !std::all_of(digits.begin(), digits.end(), ::isdigit)) {
    schema_error("unknown variable '" + s + "'");
  }
  v.index = std::stoi(digits);
  if (v.index < 1 || v.index > m) {
    throw ValidationError("variable-index", "variable '" + s + "' outside the chart dimension " + std::to_string(m));
  }
  return v;
}

FormGen parse_form_gen(const std::string& s) {
  static const std::pair<const char*, FormGen::Type> prefixes[] = {
      {"dxib", FormGen::Type::kDxibar}, {"dxi", FormGen::Type::kDxi}, {"dzb", FormGen::Type::kDzbar},
      {"dz", FormGen::Type::kDz}};
  for (const auto& [prefix, type] : prefixes) {
    const std::string p(prefix);
    if (s.rfind(p, 0) == 0) {
      const std::string digits = s.substr(p.size());
      if (!digits.empty() && std::all_of(digits.begin(), digits.end(), ::isdigit)) {
        return {type, std::stoi(digits)};
      }
    }
  }
  schema_error("unknown 1-form '" + s + "'");
}

}  // namespace

Complex complex_from_json(const json& j) {
  if (j.is_number()) return {j.get<double>(), 0.0};
  if (j.is_array() && j.size() == 2 && j[0].is_number() && j[1].is_number()) {
    return {j[0].get<double>(), j[1].get<double>()};
  }
  schema_error("complex numbers are [re, im] or a number");
}

// Adding 0.0 turns -0.0 into 0.0 so reports do not depend on zero signs.
json complex_to_json(Complex c) { return json::array({c.real() + 0.0, c.imag() + 0.0}); }

BodyExpr expr_from_json(const json& j, int m) {
  if (j.is_number()) return BodyExpr(j.get<double>());
  if (!j.is_object() || j.size() < 1) schema_error("expression must be an object or a number");
  if (j.contains("const")) {
    const int tau = j.contains("tau") ? as_int(j.at("tau"), "tau") : 0;
    return BodyExpr(TauScalar(complex_from_json(j.at("const")), tau));
  }
  if (j.contains("var")) {
    if (!j.at("var").is_string()) schema_error("var must be a string");
    return BodyExpr::var(parse_var(j.at("var").get<std::string>(), m));
  }
  auto list = [&](const char* key) {
    const json& a = j.at(key);
    if (!a.is_array()) schema_error(std::string(key) + " needs a list");
    std::vector<BodyExpr> out;
    for (const auto& x : a) out.push_back(expr_from_json(x, m));
    return out;
  };
  if (j.contains("add")) return BodyExpr::sum(list("add"));
  if (j.contains("mul")) return BodyExpr::product(list("mul"));
  if (j.contains("div")) {
    const json& a = j.at("div");
    if (!a.is_array() || a.size() != 2) schema_error("div needs [numerator, denominator]");
    return BodyExpr::quotient(expr_from_json(a[0], m), expr_from_json(a[1], m));
  }
  if (j.contains("pow")) {
    const json& a = j.at("pow");
    if (!a.is_array() || a.size() != 2) schema_error("pow needs [base, integer exponent]");
    return BodyExpr::power(expr_from_json(a[0], m), as_int(a[1], "pow exponent"));
  }
  if (j.contains("conj")) return expr_from_json(j.at("conj"), m).conj();
  if (j.contains("exp")) return BodyExpr::exp(expr_from_json(j.at("exp"), m));
  if (j.contains("opaque")) {
    if (!j.at("opaque").is_string()) schema_error("opaque needs a name");
    return BodyExpr::opaque(j.at("opaque").get<std::string>());
  }
  schema_error("unknown expression node " + j.dump());
}

json expr_to_json(const BodyExpr& e) {
  auto children = [&]() {
    json a = json::array();
    for (const auto& c : e.children()) a.push_back(expr_to_json(c));
    return a;
  };
  switch (e.kind()) {
    case BodyExpr::Kind::kConst: {
      json out = {{"const", complex_to_json(e.constant().coeff)}};
      if (e.constant().tau != 0) out["tau"] = e.constant().tau;
      return out;
    }
    case BodyExpr::Kind::kVar: {
      const Var v = e.variable();
      return {{"var", (v.conj ? "zb" : "z") + std::to_string(v.index)}};
    }
    case BodyExpr::Kind::kSum: return {{"add", children()}};
    case BodyExpr::Kind::kProduct: return {{"mul", children()}};
    case BodyExpr::Kind::kQuotient: return {{"div", children()}};
    case BodyExpr::Kind::kPower: return {{"pow", json::array({expr_to_json(e.children()[0]), e.exponent()})}};
    case BodyExpr::Kind::kExp: return {{"exp", expr_to_json(e.children()[0])}};
    case BodyExpr::Kind::kOpaque: return {{"opaque", e.name()}};
  }
  return nullptr;
}

SuperFunction superfunction_from_json(const json& j, int m, int n) {
  if (!j.is_array()) schema_error("superfunction must be a list of terms");
  SuperFunction out(m, n);
  for (const auto& t : j) {
    std::vector<int> xi = t.contains("xi") ? int_list(t.at("xi"), "xi") : std::vector<int>{};
    std::vector<int> xibar = t.contains("xibar") ? int_list(t.at("xibar"), "xibar") : std::vector<int>{};
    const int sign = sort_labels(xi) * sort_labels(xibar);
    BodyExpr coeff = expr_from_json(member(t, "coeff"), m);
    const MultiIndex mu = MultiIndex::from_labels(sign == 0 ? std::vector<int>{} : xi, n);
    const MultiIndex lambda = MultiIndex::from_labels(sign == 0 ? std::vector<int>{} : xibar, n);
    if (sign == 0) continue;
    out.add_term(mu, lambda, sign < 0 ? -coeff : coeff);
  }
  return out;
}

json superfunction_to_json(const SuperFunction& f) {
  json out = json::array();
  for (const auto& [k, e] : f.terms()) {
    out.push_back({{"xi", k.xi.labels()}, {"xibar", k.xibar.labels()}, {"coeff", expr_to_json(e)}});
  }
  return out;
}

SuperForm form_from_json(const json& j, int m, int n) {
  if (!j.is_array()) schema_error("form must be a list of terms");
  SuperForm out(m, n);
  for (const auto& t : j) {
    const SuperFunction fn = superfunction_from_json(member(t, "fn"), m, n);
    std::vector<FormGen> word;
    if (t.contains("word")) {
      if (!t.at("word").is_array()) schema_error("word must be a list of 1-form names");
      for (const auto& g : t.at("word")) {
        if (!g.is_string()) schema_error("word entries are strings such as \"dz1\"");
        word.push_back(parse_form_gen(g.get<std::string>()));
      }
    } else {
      if (t.contains("dz"))
        for (int i : int_list(t.at("dz"), "dz")) word.push_back({FormGen::Type::kDz, i});
      if (t.contains("dzbar"))
        for (int i : int_list(t.at("dzbar"), "dzbar")) word.push_back({FormGen::Type::kDzbar, i});
      auto degrees = [&](const char* key, FormGen::Type type) {
        if (!t.contains(key)) return;
        const std::vector<int> deg = int_list(t.at(key), key);
        if (static_cast<int>(deg.size()) != n) {
          throw ValidationError("form-monomial", std::string(key) + " multidegree needs n entries");
        }
        for (int k = 0; k < n; ++k) {
          if (deg[static_cast<std::size_t>(k)] < 0) throw ValidationError("form-monomial", "negative multidegree");
          for (int r = 0; r < deg[static_cast<std::size_t>(k)]; ++r) word.push_back({type, k + 1});
        }
      };
      degrees("dxi", FormGen::Type::kDxi);
      degrees("dxibar", FormGen::Type::kDxibar);
    }
    out += SuperForm::word(m, n, word, fn);
  }
  return out;
}

json form_to_json(const SuperForm& a) {
  json out = json::array();
  for (const auto& [mono, f] : a.terms()) {
    std::vector<int> dz;
    std::vector<int> dzbar;
    for (int i = 1; i <= a.m(); ++i) {
      if (mono.dz >> (i - 1) & 1U) dz.push_back(i);
      if (mono.dzbar >> (i - 1) & 1U) dzbar.push_back(i);
    }
    out.push_back({{"dz", dz}, {"dzbar", dzbar}, {"dxi", mono.dxi}, {"dxibar", mono.dxibar},
                   {"fn", superfunction_to_json(f)}});
  }
  return out;
}

SuperVectorField field_from_json(const json& j, int m, int n) {
  auto components = [&](const char* key, int count) {
    const json& a = member(j, key);
    if (!a.is_array() || static_cast<int>(a.size()) != count) {
      throw ValidationError("field-shape", std::string("field.") + key + " needs " + std::to_string(count) + " entries");
    }
    std::vector<SuperFunction> out;
    for (const auto& x : a) out.push_back(superfunction_from_json(x, m, n));
    return out;
  };
  return SuperVectorField(m, n, components("f", m), components("g", n));
}

json grassmann_to_json(const GrassmannValue& v) {
  json out = json::array();
  for (const auto& [idx, c] : v.terms()) out.push_back({{"idx", idx.labels()}, {"re", c.real()}, {"im", c.imag()}});
  return out;
}

GrassmannValue grassmann_from_json(const json& j, int gens) {
  if (!j.is_array()) schema_error("Grassmann value must be a list of terms");
  GrassmannValue out(gens);
  for (const auto& t : j) {
    std::vector<int> idx = int_list(member(t, "idx"), "idx");
    const int sign = sort_labels(idx);
    if (sign == 0) continue;
    const double re = t.contains("re") ? t.at("re").get<double>() : 0.0;
    const double im = t.contains("im") ? t.at("im").get<double>() : 0.0;
    out.accumulate(MultiIndex::from_labels(idx, gens), static_cast<double>(sign) * Complex(re, im));
  }
  return out;
}

}  // namespace superloc
