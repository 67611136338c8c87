// Copyright 2026 The superloc Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <functional>
#include <map>
#include <memory>
#include <span>
#include <string>
#include <vector>

#include "superloc/tau_scalar.hpp"

namespace superloc {

/// A chart variable: z_index or, with conj set, zbar_index (1-based).
struct Var {
  int index = 1;
  bool conj = false;
  bool operator==(const Var&) const = default;
};

using OpaqueFn = std::function<Complex(std::span<const Complex>)>;

/// Evaluators for opaque named functions, keyed by name.
class OpaqueTable {
 public:
  void add(std::string name, OpaqueFn fn) { fns_[std::move(name)] = std::move(fn); }
  const OpaqueFn* find(const std::string& name) const {
    auto it = fns_.find(name);
    return it == fns_.end() ? nullptr : &it->second;
  }

 private:
  std::map<std::string, OpaqueFn> fns_;
};

/// Immutable expression tree over z_1..z_m and zbar_1..zbar_m.
///
/// Constructors apply light canonicalization only: nested sums and products
/// are flattened, constants folded, additive zeros and multiplicative ones
/// dropped. Nothing else is simplified.
class BodyExpr {
 public:
  enum class Kind { kConst, kVar, kSum, kProduct, kQuotient, kPower, kExp, kOpaque };

  BodyExpr();  // the constant 0
  BodyExpr(TauScalar c);
  BodyExpr(Complex c) : BodyExpr(TauScalar(c)) {}
  BodyExpr(double c) : BodyExpr(TauScalar(c)) {}

  static BodyExpr var(int index, bool conj = false);
  static BodyExpr var(Var v) { return var(v.index, v.conj); }
  static BodyExpr opaque(std::string name);
  static BodyExpr sum(std::vector<BodyExpr> terms);
  static BodyExpr product(std::vector<BodyExpr> factors);
  static BodyExpr quotient(BodyExpr num, BodyExpr den);
  static BodyExpr power(BodyExpr base, int exponent);
  static BodyExpr exp(BodyExpr arg);

  Kind kind() const;
  bool is_constant() const { return kind() == Kind::kConst; }
  bool is_zero() const;
  bool is_one() const;
  /// Constant value; only meaningful when is_constant().
  TauScalar constant() const;
  Var variable() const;
  int exponent() const;
  const std::string& name() const;
  const std::vector<BodyExpr>& children() const;

  /// Exact evaluation with zbar bound to conj(z).
  TauScalar eval(std::span<const Complex> z, const OpaqueTable* opaque = nullptr) const;
  Complex eval_complex(std::span<const Complex> z, const OpaqueTable* opaque = nullptr) const {
    return eval(z, opaque).value();
  }

  /// Wirtinger derivative; z and zbar are independent.
  BodyExpr diff(Var v) const;
  /// Swaps z and zbar and conjugates constants.
  BodyExpr conj() const;

  bool depends_on_conjugates() const;
  bool contains_opaque() const;
  /// Largest variable index referenced (0 if none).
  int max_var() const;

  std::string to_string() const;

  friend bool operator==(const BodyExpr& a, const BodyExpr& b);

  friend BodyExpr operator+(const BodyExpr& a, const BodyExpr& b) { return sum({a, b}); }
  friend BodyExpr operator-(const BodyExpr& a, const BodyExpr& b) { return sum({a, -b}); }
  friend BodyExpr operator-(const BodyExpr& a) { return product({BodyExpr(-1.0), a}); }
  friend BodyExpr operator*(const BodyExpr& a, const BodyExpr& b) { return product({a, b}); }
  friend BodyExpr operator/(const BodyExpr& a, const BodyExpr& b) { return quotient(a, b); }

  struct Node;
  const Node* node() const { return node_.get(); }

 private:
  explicit BodyExpr(std::shared_ptr<const Node> n) : node_(std::move(n)) {}
  std::shared_ptr<const Node> node_;
};

/// Flat evaluation program for repeated numeric evaluation (quadrature).
/// Shared subtrees are evaluated once.
class CompiledExpr {
 public:
  explicit CompiledExpr(const BodyExpr& e, const OpaqueTable* opaque = nullptr);

  /// `scratch` is caller-owned so one program can be reused without
  /// allocation per call.
  Complex eval(std::span<const Complex> z, std::vector<Complex>& scratch) const;
  Complex eval(std::span<const Complex> z) const {
    std::vector<Complex> scratch;
    return eval(z, scratch);
  }

 private:
  enum class Op { kConst, kVar, kConjVar, kSum, kProduct, kQuotient, kPower, kExp, kOpaque };
  struct Instr {
    Op op;
    int first = 0;  // into operands_
    int count = 0;
    int k = 0;      // variable index or exponent
    Complex c{};
    const OpaqueFn* fn = nullptr;
  };
  int emit(const BodyExpr& e, std::map<const BodyExpr::Node*, int>& seen);

  std::vector<Instr> code_;
  std::vector<int> operands_;
  std::vector<std::string> names_;  // opaque names for error messages
  const OpaqueTable* opaque_;
};

}  // namespace superloc
