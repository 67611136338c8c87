// Copyright 2026 The superloc Authors
// SPDX-License-Identifier: Apache-2.0

#include "superloc/grassmann.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <numeric>
#include <sstream>

#include "superloc/error.hpp"

namespace superloc {

const char* to_string(Parity p) {
  switch (p) {
    case Parity::kEven: return "even";
    case Parity::kOdd: return "odd";
    case Parity::kMixed: return "mixed";
  }
  return "unknown";
}

MultiIndex MultiIndex::from_labels(std::span<const int> labels, int gens) {
  if (gens < 0 || gens > kMaxGenerators) {
    throw ValidationError("generator-count", "generator count must be in 0..64");
  }
  std::uint64_t bits = 0;
  int prev = 0;
  for (int label : labels) {
    if (label < 1 || label > gens) {
      throw ValidationError("multi-index-range",
                            "label " + std::to_string(label) + " outside 1.." + std::to_string(gens));
    }
    if (label <= prev) {
      throw ValidationError("multi-index-increasing", "multi-index labels must be strictly increasing");
    }
    bits |= std::uint64_t{1} << (label - 1);
    prev = label;
  }
  return MultiIndex(bits);
}

MultiIndex MultiIndex::full(int count) {
  if (count <= 0) return MultiIndex{};
  if (count >= 64) return MultiIndex(~std::uint64_t{0});
  return MultiIndex((std::uint64_t{1} << count) - 1);
}

int MultiIndex::size() const { return std::popcount(bits_); }

int MultiIndex::position(int label) const {
  if (!contains(label)) return 0;
  const std::uint64_t below = label == 1 ? 0 : (bits_ & ((std::uint64_t{1} << (label - 1)) - 1));
  return std::popcount(below) + 1;
}

int MultiIndex::max_label() const { return bits_ == 0 ? 0 : 64 - std::countl_zero(bits_); }

std::vector<int> MultiIndex::labels() const {
  std::vector<int> out;
  out.reserve(static_cast<std::size_t>(size()));
  for (std::uint64_t b = bits_; b != 0; b &= b - 1) out.push_back(std::countr_zero(b) + 1);
  return out;
}

std::strong_ordering MultiIndex::operator<=>(const MultiIndex& other) const {
  if (auto c = size() <=> other.size(); c != 0) return c;
  // Same length: compare label sequences lexicographically. The lowest
  // differing bit decides: whoever owns it has the smaller label there.
  const std::uint64_t diff = bits_ ^ other.bits_;
  if (diff == 0) return std::strong_ordering::equal;
  const std::uint64_t lowest = diff & (~diff + 1);
  return (bits_ & lowest) ? std::strong_ordering::less : std::strong_ordering::greater;
}

int monomial_product_sign(std::uint64_t a, std::uint64_t b) {
  if (a & b) return 0;
  // Each generator j of b must hop over every generator of a above j.
  int swaps = 0;
  for (std::uint64_t rest = b; rest != 0; rest &= rest - 1) {
    const int j = std::countr_zero(rest);
    swaps += std::popcount(j == 63 ? 0 : (a >> (j + 1)));
  }
  return (swaps & 1) ? -1 : 1;
}

GrassmannValue::GrassmannValue(int gens) : gens_(gens) {
  if (gens < 0 || gens > MultiIndex::kMaxGenerators) {
    throw ValidationError("generator-count", "generator count must be in 0..64");
  }
}

GrassmannValue GrassmannValue::scalar(int gens, Complex c) {
  GrassmannValue v(gens);
  v.accumulate(MultiIndex{}, c);
  return v;
}

GrassmannValue GrassmannValue::generator(int gens, int label, Complex c) {
  GrassmannValue v(gens);
  v.accumulate(MultiIndex::from_labels({label}, gens), c);
  return v;
}

GrassmannValue GrassmannValue::monomial(int gens, MultiIndex idx, Complex c) {
  if (idx.max_label() > gens) {
    throw ValidationError("multi-index-range", "monomial uses a generator beyond the algebra");
  }
  GrassmannValue v(gens);
  v.accumulate(idx, c);
  return v;
}

Complex GrassmannValue::coefficient(const MultiIndex& idx) const {
  auto it = terms_.find(idx);
  return it == terms_.end() ? Complex{} : it->second;
}

GrassmannValue GrassmannValue::soul() const {
  GrassmannValue s = *this;
  s.terms_.erase(MultiIndex{});
  return s;
}

Parity GrassmannValue::parity() const {
  bool even = false;
  bool odd = false;
  for (const auto& [idx, c] : terms_) (idx.is_odd() ? odd : even) = true;
  if (odd && even) return Parity::kMixed;
  return odd ? Parity::kOdd : Parity::kEven;
}

void GrassmannValue::accumulate(const MultiIndex& idx, Complex c) {
  if (c == Complex{}) return;
  auto [it, inserted] = terms_.try_emplace(idx, c);
  if (!inserted) {
    it->second += c;
    if (it->second == Complex{}) terms_.erase(it);
  }
}

GrassmannValue& GrassmannValue::operator+=(const GrassmannValue& other) {
  if (other.gens_ != gens_) throw ValidationError("generator-count", "generator-count mismatch");
  for (const auto& [idx, c] : other.terms_) accumulate(idx, c);
  return *this;
}

GrassmannValue& GrassmannValue::operator-=(const GrassmannValue& other) {
  if (other.gens_ != gens_) throw ValidationError("generator-count", "generator-count mismatch");
  for (const auto& [idx, c] : other.terms_) accumulate(idx, -c);
  return *this;
}

GrassmannValue& GrassmannValue::operator*=(Complex c) {
  if (c == Complex{}) {
    terms_.clear();
    return *this;
  }
  for (auto& [idx, v] : terms_) v *= c;
  std::erase_if(terms_, [](const auto& kv) { return kv.second == Complex{}; });
  return *this;
}

GrassmannValue operator*(const GrassmannValue& a, const GrassmannValue& b) {
  if (a.gens_ != b.gens_) throw ValidationError("generator-count", "generator-count mismatch");
  GrassmannValue out(a.gens_);
  for (const auto& [ia, ca] : a.terms_) {
    for (const auto& [ib, cb] : b.terms_) {
      const int sign = monomial_product_sign(ia.bits(), ib.bits());
      if (sign == 0) continue;
      out.accumulate(MultiIndex::from_bits(ia.bits() | ib.bits()), static_cast<double>(sign) * ca * cb);
    }
  }
  return out;
}

namespace {

std::string format_complex(Complex c) {
  std::ostringstream os;
  os.precision(17);
  if (c.imag() == 0.0) {
    os << c.real();
  } else if (c.real() == 0.0) {
    os << c.imag() << "i";
  } else {
    os << "(" << c.real() << (c.imag() < 0 ? "-" : "+") << std::abs(c.imag()) << "i)";
  }
  return os.str();
}

}  // namespace

std::string GrassmannValue::to_string() const {
  if (terms_.empty()) return "0";
  std::string out;
  for (const auto& [idx, c] : terms_) {
    if (!out.empty()) out += " + ";
    out += format_complex(c);
    for (int label : idx.labels()) out += " b" + std::to_string(label);
  }
  return out;
}

GrassmannValue gr_mul(const GrassmannValue& a, const GrassmannValue& b) { return a * b; }

GrassmannValue gr_pow(const GrassmannValue& a, int k) {
  GrassmannValue acc = GrassmannValue::scalar(a.gens(), 1.0);
  for (int i = 0; i < k; ++i) acc = acc * a;
  return acc;
}

GrassmannValue gr_inverse(const GrassmannValue& a) {
  if (a.parity() != Parity::kEven) {
    throw ValidationError("even-parity", "gr_inverse requires an even element");
  }
  const Complex b = a.body();
  if (b == Complex{}) throw MathDomainError("invertible-body", "element with zero body is not invertible");
  // a = b (1 + nu), nu = soul/b nilpotent of order floor(L/2) + 1.
  const GrassmannValue minus_nu = a.soul() * (-1.0 / b);
  GrassmannValue term = GrassmannValue::scalar(a.gens(), 1.0);
  GrassmannValue sum = term;
  for (int k = 1; k <= a.gens() / 2; ++k) {
    term = term * minus_nu;
    if (term.is_zero()) break;
    sum += term;
  }
  return sum * (1.0 / b);
}

GrassmannValue gr_exp(const GrassmannValue& a) {
  const GrassmannValue s = a.soul();
  GrassmannValue term = GrassmannValue::scalar(a.gens(), 1.0);
  GrassmannValue sum = term;
  for (int k = 1; k <= a.gens(); ++k) {
    term = term * s * (1.0 / k);
    if (term.is_zero()) break;
    sum += term;
  }
  return sum * std::exp(a.body());
}

double max_abs_diff(const GrassmannValue& a, const GrassmannValue& b) {
  double worst = 0.0;
  const GrassmannValue d = a - b;
  for (const auto& [idx, c] : d.terms()) worst = std::max(worst, std::abs(c));
  return worst;
}

GrassmannMatrix::GrassmannMatrix(int rows, int cols, int gens)
    : rows_(rows), cols_(cols), gens_(gens),
      entries_(static_cast<std::size_t>(rows * cols), GrassmannValue(gens)) {
  if (rows < 0 || cols < 0) throw ValidationError("matrix-shape", "negative matrix dimension");
}

GrassmannMatrix GrassmannMatrix::identity(int n, int gens) {
  GrassmannMatrix m(n, n, gens);
  for (int i = 0; i < n; ++i) m.at(i, i) = GrassmannValue::scalar(gens, 1.0);
  return m;
}

bool GrassmannMatrix::all_entries(Parity p) const {
  return std::all_of(entries_.begin(), entries_.end(), [p](const GrassmannValue& v) {
    return v.is_zero() || v.parity() == p;
  });
}

GrassmannMatrix operator*(const GrassmannMatrix& a, const GrassmannMatrix& b) {
  if (a.cols_ != b.rows_ || a.gens_ != b.gens_) {
    throw ValidationError("matrix-shape", "incompatible matrix product");
  }
  GrassmannMatrix out(a.rows_, b.cols_, a.gens_);
  for (int i = 0; i < a.rows_; ++i) {
    for (int j = 0; j < b.cols_; ++j) {
      GrassmannValue acc(a.gens_);
      for (int k = 0; k < a.cols_; ++k) acc += a.at(i, k) * b.at(k, j);
      out.at(i, j) = std::move(acc);
    }
  }
  return out;
}

GrassmannMatrix operator-(const GrassmannMatrix& a, const GrassmannMatrix& b) {
  if (a.rows_ != b.rows_ || a.cols_ != b.cols_ || a.gens_ != b.gens_) {
    throw ValidationError("matrix-shape", "incompatible matrix difference");
  }
  GrassmannMatrix out = a;
  for (std::size_t i = 0; i < out.entries_.size(); ++i) out.entries_[i] -= b.entries_[i];
  return out;
}

namespace {

void require_square_even(const GrassmannMatrix& m, const char* what) {
  if (m.rows() != m.cols()) {
    throw ValidationError("matrix-square", std::string(what) + " requires a square matrix");
  }
  if (!m.all_entries(Parity::kEven)) {
    throw ValidationError("even-entries", std::string(what) + " requires even entries");
  }
}

GrassmannValue leibniz_det(const GrassmannMatrix& m) {
  const int n = m.rows();
  std::vector<int> perm(static_cast<std::size_t>(n));
  std::iota(perm.begin(), perm.end(), 0);
  GrassmannValue det(m.gens());
  do {
    int inversions = 0;
    for (int i = 0; i < n; ++i)
      for (int j = i + 1; j < n; ++j)
        if (perm[static_cast<std::size_t>(i)] > perm[static_cast<std::size_t>(j)]) ++inversions;
    GrassmannValue prod = GrassmannValue::scalar(m.gens(), (inversions & 1) ? -1.0 : 1.0);
    for (int i = 0; i < n && !prod.is_zero(); ++i) prod = prod * m.at(i, perm[static_cast<std::size_t>(i)]);
    det += prod;
  } while (std::next_permutation(perm.begin(), perm.end()));
  return det;
}

// Laplace expansion row by row, memoised over the set of used columns.
GrassmannValue minor_expansion_det(const GrassmannMatrix& m) {
  const int n = m.rows();
  std::vector<GrassmannValue> partial(std::size_t{1} << n, GrassmannValue(m.gens()));
  partial[0] = GrassmannValue::scalar(m.gens(), 1.0);
  for (std::uint32_t used = 0; used < (1U << n); ++used) {
    if (partial[used].is_zero()) continue;
    const int row = std::popcount(used);
    if (row == n) continue;
    for (int col = 0; col < n; ++col) {
      if (used & (1U << col)) continue;
      const int above = std::popcount(used >> (col + 1));
      GrassmannValue term = partial[used] * m.at(row, col);
      if (above & 1) term *= -1.0;
      partial[used | (1U << col)] += term;
    }
  }
  return partial[(std::size_t{1} << n) - 1];
}

}  // namespace

GrassmannValue even_det(const GrassmannMatrix& m) {
  require_square_even(m, "even_det");
  if (m.rows() == 0) return GrassmannValue::scalar(m.gens(), 1.0);
  return m.rows() <= 3 ? leibniz_det(m) : minor_expansion_det(m);
}

GrassmannMatrix even_inverse(const GrassmannMatrix& m) {
  require_square_even(m, "even_inverse");
  const int n = m.rows();
  GrassmannMatrix work = m;
  GrassmannMatrix inv = GrassmannMatrix::identity(n, m.gens());
  for (int col = 0; col < n; ++col) {
    int pivot = -1;
    double best = 0.0;
    for (int r = col; r < n; ++r) {
      const double mag = std::abs(work.at(r, col).body());
      if (mag > best) {
        best = mag;
        pivot = r;
      }
    }
    if (pivot < 0) throw MathDomainError("invertible-body", "matrix body is singular");
    if (pivot != col) {
      for (int c = 0; c < n; ++c) {
        std::swap(work.at(pivot, c), work.at(col, c));
        std::swap(inv.at(pivot, c), inv.at(col, c));
      }
    }
    const GrassmannValue pinv = gr_inverse(work.at(col, col));
    for (int c = 0; c < n; ++c) {
      work.at(col, c) = pinv * work.at(col, c);
      inv.at(col, c) = pinv * inv.at(col, c);
    }
    for (int r = 0; r < n; ++r) {
      if (r == col || work.at(r, col).is_zero()) continue;
      const GrassmannValue factor = work.at(r, col);
      for (int c = 0; c < n; ++c) {
        work.at(r, c) -= factor * work.at(col, c);
        inv.at(r, c) -= factor * inv.at(col, c);
      }
    }
  }
  return inv;
}

GrassmannValue berezinian(const GrassmannMatrix& a, const GrassmannMatrix& b,
                          const GrassmannMatrix& c, const GrassmannMatrix& d) {
  const int p = a.rows();
  const int q = d.rows();
  if (a.cols() != p || d.cols() != q || b.rows() != p || b.cols() != q || c.rows() != q || c.cols() != p) {
    throw ValidationError("block-shapes", "Berezinian blocks have incompatible shapes");
  }
  if (!a.all_entries(Parity::kEven) || !d.all_entries(Parity::kEven)) {
    throw ValidationError("even-entries", "Berezinian diagonal blocks must be even");
  }
  if (!b.all_entries(Parity::kOdd) || !c.all_entries(Parity::kOdd)) {
    throw ValidationError("odd-entries", "Berezinian off-diagonal blocks must be odd");
  }
  const GrassmannValue det_d = even_det(d);
  if (det_d.body() == Complex{}) {
    throw MathDomainError("berezinian-defined", "det(D) has zero body; Berezinian undefined");
  }
  const GrassmannMatrix schur = a - b * even_inverse(d) * c;
  return even_det(schur) * gr_inverse(det_d);
}

}  // namespace superloc
