// Copyright 2026 The superloc Authors
// SPDX-License-Identifier: Apache-2.0

#include "superloc/body_expr.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "superloc/error.hpp"

namespace superloc {

struct BodyExpr::Node {
  Kind kind = Kind::kConst;
  TauScalar value{};
  Var var{};
  int exponent = 0;
  std::string name;
  std::vector<BodyExpr> children;
};

namespace {

using NodePtr = std::shared_ptr<BodyExpr::Node>;

const std::shared_ptr<const BodyExpr::Node>& zero_node() {
  static const std::shared_ptr<const BodyExpr::Node> z = std::make_shared<BodyExpr::Node>();
  return z;
}

std::string format_scalar(const TauScalar& s) {
  std::ostringstream os;
  os.precision(17);
  const Complex c = s.coeff;
  if (c.imag() == 0.0) {
    os << c.real();
  } else {
    os << "(" << c.real() << (c.imag() < 0 ? "-" : "+") << std::abs(c.imag()) << "i)";
  }
  if (s.tau != 0) os << "*(2pi i)^" << s.tau;
  return os.str();
}

std::string var_name(Var v) { return (v.conj ? "zb" : "z") + std::to_string(v.index); }

}  // namespace

BodyExpr::BodyExpr() : node_(zero_node()) {}

BodyExpr::BodyExpr(TauScalar c) {
  if (c.is_zero()) {
    node_ = zero_node();
    return;
  }
  auto n = std::make_shared<Node>();
  n->kind = Kind::kConst;
  n->value = c;
  node_ = std::move(n);
}

BodyExpr BodyExpr::var(int index, bool conj) {
  if (index < 1) throw ValidationError("variable-index", "variable index must be >= 1");
  auto n = std::make_shared<Node>();
  n->kind = Kind::kVar;
  n->var = {index, conj};
  return BodyExpr(std::move(n));
}

BodyExpr BodyExpr::opaque(std::string name) {
  if (name.empty()) throw ValidationError("opaque-name", "opaque function needs a name");
  auto n = std::make_shared<Node>();
  n->kind = Kind::kOpaque;
  n->name = std::move(name);
  return BodyExpr(std::move(n));
}

BodyExpr BodyExpr::sum(std::vector<BodyExpr> terms) {
  // Constants are folded per power of 2*pi*i so exact values survive.
  std::map<int, Complex> constants;
  std::vector<BodyExpr> rest;
  auto absorb = [&](const BodyExpr& t, auto&& self) -> void {
    switch (t.kind()) {
      case Kind::kConst:
        if (!t.is_zero()) constants[t.node_->value.tau] += t.node_->value.coeff;
        break;
      case Kind::kSum:
        for (const auto& c : t.children()) self(c, self);
        break;
      default:
        rest.push_back(t);
    }
  };
  for (const auto& t : terms) absorb(t, absorb);
  std::vector<BodyExpr> out;
  for (const auto& [tau, c] : constants) {
    if (c != Complex{}) out.emplace_back(TauScalar(c, tau));
  }
  out.insert(out.end(), rest.begin(), rest.end());
  if (out.empty()) return BodyExpr();
  if (out.size() == 1) return out.front();
  auto n = std::make_shared<Node>();
  n->kind = Kind::kSum;
  n->children = std::move(out);
  return BodyExpr(std::move(n));
}

BodyExpr BodyExpr::product(std::vector<BodyExpr> factors) {
  TauScalar constant{1.0};
  std::vector<BodyExpr> rest;
  bool zero = false;
  auto absorb = [&](const BodyExpr& f, auto&& self) -> void {
    switch (f.kind()) {
      case Kind::kConst:
        if (f.is_zero()) zero = true;
        constant = constant * f.node_->value;
        break;
      case Kind::kProduct:
        for (const auto& c : f.children()) self(c, self);
        break;
      default:
        rest.push_back(f);
    }
  };
  for (const auto& f : factors) absorb(f, absorb);
  if (zero) return BodyExpr();
  if (rest.empty()) return BodyExpr(constant);
  if (constant.is_one() && rest.size() == 1) return rest.front();
  std::vector<BodyExpr> out;
  if (!constant.is_one()) out.emplace_back(constant);
  out.insert(out.end(), rest.begin(), rest.end());
  auto n = std::make_shared<Node>();
  n->kind = Kind::kProduct;
  n->children = std::move(out);
  return BodyExpr(std::move(n));
}

BodyExpr BodyExpr::quotient(BodyExpr num, BodyExpr den) {
  if (num.is_zero()) return BodyExpr();
  if (den.is_one()) return num;
  if (den.is_constant() && !den.is_zero()) {
    return product({std::move(num), BodyExpr(TauScalar{1.0} / den.constant())});
  }
  auto n = std::make_shared<Node>();
  n->kind = Kind::kQuotient;
  n->children = {std::move(num), std::move(den)};
  return BodyExpr(std::move(n));
}

BodyExpr BodyExpr::power(BodyExpr base, int exponent) {
  if (exponent == 0) return BodyExpr(1.0);
  if (exponent == 1) return base;
  if (base.is_constant() && !(base.is_zero() && exponent < 0)) return BodyExpr(base.constant().pow(exponent));
  if (base.kind() == Kind::kPower) {
    return power(base.children().front(), base.exponent() * exponent);
  }
  auto n = std::make_shared<Node>();
  n->kind = Kind::kPower;
  n->exponent = exponent;
  n->children = {std::move(base)};
  return BodyExpr(std::move(n));
}

BodyExpr BodyExpr::exp(BodyExpr arg) {
  if (arg.is_zero()) return BodyExpr(1.0);
  if (arg.is_constant()) return BodyExpr(std::exp(arg.constant().value()));
  auto n = std::make_shared<Node>();
  n->kind = Kind::kExp;
  n->children = {std::move(arg)};
  return BodyExpr(std::move(n));
}

BodyExpr::Kind BodyExpr::kind() const { return node_->kind; }
bool BodyExpr::is_zero() const { return node_->kind == Kind::kConst && node_->value.is_zero(); }
bool BodyExpr::is_one() const { return node_->kind == Kind::kConst && node_->value.is_one(); }
TauScalar BodyExpr::constant() const { return node_->value; }
Var BodyExpr::variable() const { return node_->var; }
int BodyExpr::exponent() const { return node_->exponent; }
const std::string& BodyExpr::name() const { return node_->name; }
const std::vector<BodyExpr>& BodyExpr::children() const { return node_->children; }

TauScalar BodyExpr::eval(std::span<const Complex> z, const OpaqueTable* opaque) const {
  const Node& n = *node_;
  switch (n.kind) {
    case Kind::kConst:
      return n.value;
    case Kind::kVar: {
      if (n.var.index > static_cast<int>(z.size())) {
        throw ValidationError("variable-index", var_name(n.var) + " outside the chart dimension");
      }
      const Complex v = z[static_cast<std::size_t>(n.var.index - 1)];
      return TauScalar(n.var.conj ? std::conj(v) : v);
    }
    case Kind::kSum: {
      TauScalar acc{};
      for (const auto& c : n.children) acc = acc + c.eval(z, opaque);
      return acc;
    }
    case Kind::kProduct: {
      TauScalar acc{1.0};
      for (const auto& c : n.children) {
        acc = acc * c.eval(z, opaque);
        if (acc.is_zero()) break;
      }
      return acc;
    }
    case Kind::kQuotient: {
      const TauScalar den = n.children[1].eval(z, opaque);
      if (den.is_zero()) {
        throw MathDomainError("nonzero-denominator", "division by zero in " + n.children[1].to_string());
      }
      return n.children[0].eval(z, opaque) / den;
    }
    case Kind::kPower: {
      const TauScalar base = n.children[0].eval(z, opaque);
      if (base.is_zero() && n.exponent < 0) {
        throw MathDomainError("nonzero-denominator", "negative power of zero in " + to_string());
      }
      return base.pow(n.exponent);
    }
    case Kind::kExp:
      return TauScalar(std::exp(n.children[0].eval(z, opaque).value()));
    case Kind::kOpaque: {
      const OpaqueFn* fn = opaque ? opaque->find(n.name) : nullptr;
      if (!fn) throw ValidationError("opaque-evaluator", "no evaluator registered for opaque function " + n.name);
      return TauScalar((*fn)(z));
    }
  }
  return {};
}

BodyExpr BodyExpr::diff(Var v) const {
  const Node& n = *node_;
  switch (n.kind) {
    case Kind::kConst:
      return BodyExpr();
    case Kind::kVar:
      return n.var == v ? BodyExpr(1.0) : BodyExpr();
    case Kind::kSum: {
      std::vector<BodyExpr> terms;
      for (const auto& c : n.children) terms.push_back(c.diff(v));
      return sum(std::move(terms));
    }
    case Kind::kProduct: {
      std::vector<BodyExpr> terms;
      for (std::size_t k = 0; k < n.children.size(); ++k) {
        BodyExpr dk = n.children[k].diff(v);
        if (dk.is_zero()) continue;
        std::vector<BodyExpr> factors = n.children;
        factors[k] = std::move(dk);
        terms.push_back(product(std::move(factors)));
      }
      return sum(std::move(terms));
    }
    case Kind::kQuotient: {
      const BodyExpr& a = n.children[0];
      const BodyExpr& b = n.children[1];
      BodyExpr da = a.diff(v);
      BodyExpr db = b.diff(v);
      return quotient(da, b) - quotient(a * db, power(b, 2));
    }
    case Kind::kPower: {
      const BodyExpr& b = n.children[0];
      return product({BodyExpr(static_cast<double>(n.exponent)), power(b, n.exponent - 1), b.diff(v)});
    }
    case Kind::kExp:
      return *this * n.children[0].diff(v);
    case Kind::kOpaque:
      return opaque("d[" + var_name(v) + "](" + n.name + ")");
  }
  return BodyExpr();
}

BodyExpr BodyExpr::conj() const {
  const Node& n = *node_;
  switch (n.kind) {
    case Kind::kConst: {
      // conj((2 pi i)^t) = (-1)^t (2 pi i)^t
      Complex c = std::conj(n.value.coeff);
      if (n.value.tau & 1) c = -c;
      return BodyExpr(TauScalar(c, n.value.tau));
    }
    case Kind::kVar:
      return var(n.var.index, !n.var.conj);
    case Kind::kSum:
    case Kind::kProduct: {
      std::vector<BodyExpr> out;
      for (const auto& c : n.children) out.push_back(c.conj());
      return n.kind == Kind::kSum ? sum(std::move(out)) : product(std::move(out));
    }
    case Kind::kQuotient:
      return quotient(n.children[0].conj(), n.children[1].conj());
    case Kind::kPower:
      return power(n.children[0].conj(), n.exponent);
    case Kind::kExp:
      return exp(n.children[0].conj());
    case Kind::kOpaque:
      return opaque("conj(" + n.name + ")");
  }
  return BodyExpr();
}

bool BodyExpr::depends_on_conjugates() const {
  const Node& n = *node_;
  if (n.kind == Kind::kVar) return n.var.conj;
  if (n.kind == Kind::kOpaque) return true;  // unknown, so assume the worst
  return std::any_of(n.children.begin(), n.children.end(),
                     [](const BodyExpr& c) { return c.depends_on_conjugates(); });
}

bool BodyExpr::contains_opaque() const {
  const Node& n = *node_;
  if (n.kind == Kind::kOpaque) return true;
  return std::any_of(n.children.begin(), n.children.end(), [](const BodyExpr& c) { return c.contains_opaque(); });
}

int BodyExpr::max_var() const {
  const Node& n = *node_;
  if (n.kind == Kind::kVar) return n.var.index;
  int best = 0;
  for (const auto& c : n.children) best = std::max(best, c.max_var());
  return best;
}

std::string BodyExpr::to_string() const {
  const Node& n = *node_;
  auto join = [&](const char* sep) {
    std::string s = "(";
    for (std::size_t k = 0; k < n.children.size(); ++k) {
      if (k) s += sep;
      s += n.children[k].to_string();
    }
    return s + ")";
  };
  switch (n.kind) {
    case Kind::kConst: return format_scalar(n.value);
    case Kind::kVar: return var_name(n.var);
    case Kind::kSum: return join(" + ");
    case Kind::kProduct: return join("*");
    case Kind::kQuotient: return n.children[0].to_string() + "/" + n.children[1].to_string();
    case Kind::kPower: return n.children[0].to_string() + "^" + std::to_string(n.exponent);
    case Kind::kExp: return "exp" + join("");
    case Kind::kOpaque: return n.name;
  }
  return "?";
}

bool operator==(const BodyExpr& a, const BodyExpr& b) {
  if (a.node_ == b.node_) return true;
  const auto& x = *a.node_;
  const auto& y = *b.node_;
  if (x.kind != y.kind) return false;
  switch (x.kind) {
    case BodyExpr::Kind::kConst: return x.value == y.value;
    case BodyExpr::Kind::kVar: return x.var == y.var;
    case BodyExpr::Kind::kOpaque: return x.name == y.name;
    case BodyExpr::Kind::kPower:
      if (x.exponent != y.exponent) return false;
      break;
    default:
      break;
  }
  return x.children == y.children;
}

CompiledExpr::CompiledExpr(const BodyExpr& e, const OpaqueTable* opaque) : opaque_(opaque) {
  std::map<const BodyExpr::Node*, int> seen;
  emit(e, seen);
}

int CompiledExpr::emit(const BodyExpr& e, std::map<const BodyExpr::Node*, int>& seen) {
  if (auto it = seen.find(e.node()); it != seen.end()) return it->second;
  std::vector<int> args;
  for (const auto& c : e.children()) args.push_back(emit(c, seen));
  Instr in{};
  in.first = static_cast<int>(operands_.size());
  in.count = static_cast<int>(args.size());
  operands_.insert(operands_.end(), args.begin(), args.end());
  switch (e.kind()) {
    case BodyExpr::Kind::kConst:
      in.op = Op::kConst;
      in.c = e.constant().value();
      break;
    case BodyExpr::Kind::kVar:
      in.op = e.variable().conj ? Op::kConjVar : Op::kVar;
      in.k = e.variable().index - 1;
      break;
    case BodyExpr::Kind::kSum: in.op = Op::kSum; break;
    case BodyExpr::Kind::kProduct: in.op = Op::kProduct; break;
    case BodyExpr::Kind::kQuotient: in.op = Op::kQuotient; break;
    case BodyExpr::Kind::kPower:
      in.op = Op::kPower;
      in.k = e.exponent();
      break;
    case BodyExpr::Kind::kExp: in.op = Op::kExp; break;
    case BodyExpr::Kind::kOpaque:
      in.op = Op::kOpaque;
      in.fn = opaque_ ? opaque_->find(e.name()) : nullptr;
      if (!in.fn) throw ValidationError("opaque-evaluator", "no evaluator registered for opaque function " + e.name());
      break;
  }
  code_.push_back(in);
  const int slot = static_cast<int>(code_.size()) - 1;
  seen.emplace(e.node(), slot);
  return slot;
}

Complex CompiledExpr::eval(std::span<const Complex> z, std::vector<Complex>& r) const {
  r.resize(code_.size());
  for (std::size_t pc = 0; pc < code_.size(); ++pc) {
    const Instr& in = code_[pc];
    const int* arg = operands_.data() + in.first;
    Complex v;
    switch (in.op) {
      case Op::kConst: v = in.c; break;
      case Op::kVar:
        if (in.k >= static_cast<int>(z.size())) throw ValidationError("variable-index", "variable outside the chart dimension");
        v = z[static_cast<std::size_t>(in.k)];
        break;
      case Op::kConjVar:
        if (in.k >= static_cast<int>(z.size())) throw ValidationError("variable-index", "variable outside the chart dimension");
        v = std::conj(z[static_cast<std::size_t>(in.k)]);
        break;
      case Op::kSum:
        v = 0.0;
        for (int a = 0; a < in.count; ++a) v += r[static_cast<std::size_t>(arg[a])];
        break;
      case Op::kProduct:
        v = 1.0;
        for (int a = 0; a < in.count; ++a) v *= r[static_cast<std::size_t>(arg[a])];
        break;
      case Op::kQuotient: {
        const Complex den = r[static_cast<std::size_t>(arg[1])];
        if (den == Complex{}) throw MathDomainError("nonzero-denominator", "division by zero");
        v = r[static_cast<std::size_t>(arg[0])] / den;
        break;
      }
      case Op::kPower: {
        Complex base = r[static_cast<std::size_t>(arg[0])];
        int k = in.k;
        if (k < 0) {
          if (base == Complex{}) throw MathDomainError("nonzero-denominator", "negative power of zero");
          base = 1.0 / base;
          k = -k;
        }
        v = 1.0;
        while (k > 0) {
          if (k & 1) v *= base;
          base *= base;
          k >>= 1;
        }
        break;
      }
      case Op::kExp: v = std::exp(r[static_cast<std::size_t>(arg[0])]); break;
      case Op::kOpaque: v = (*in.fn)(z); break;
    }
    r[pc] = v;
  }
  return r.back();
}

}  // namespace superloc
