// Copyright 2026 The superloc Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <nlohmann/json.hpp>

#include "superloc/body_expr.hpp"
#include "superloc/grassmann.hpp"
#include "superloc/superform.hpp"
#include "superloc/superfun.hpp"

namespace superloc {

using json = nlohmann::json;

/// [re, im] or a bare number.
Complex complex_from_json(const json& j);
json complex_to_json(Complex c);

/// Expression grammar:
///   {"const":[re,im]} (optionally "tau":k for a factor (2 pi i)^k)
///   {"var":"z1"} | {"var":"zb1"} | {"add":[...]} | {"mul":[...]}
///   {"div":[a,b]} | {"pow":[a,k]} | {"conj":a} | {"exp":a} | {"opaque":"name"}
/// A bare number is a real constant. Variable indices are checked against m.
BodyExpr expr_from_json(const json& j, int m);
json expr_to_json(const BodyExpr& e);

/// List of {"xi":[...], "xibar":[...], "coeff":expr}. Label lists may be in
/// any order; the reordering sign is applied and repeated labels give zero.
SuperFunction superfunction_from_json(const json& j, int m, int n);
json superfunction_to_json(const SuperFunction& f);

/// List of {"dz":[...], "dzbar":[...], "dxi":[k_1..k_n], "dxibar":[...], "fn":superfunction}.
/// "dz"/"dzbar" may be unsorted. Alternatively "word":["dz1","dzb1","dxi1",...]
/// gives the generators in an arbitrary order; either way the loader
/// normalizes to canonical order and applies the sign.
SuperForm form_from_json(const json& j, int m, int n);
json form_to_json(const SuperForm& a);

/// {"f":[superfunction...], "g":[superfunction...]}.
SuperVectorField field_from_json(const json& j, int m, int n);

/// List of {"idx":[...], "re":x, "im":y}.
json grassmann_to_json(const GrassmannValue& v);
GrassmannValue grassmann_from_json(const json& j, int gens);

}  // namespace superloc
