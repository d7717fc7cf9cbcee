// Copyright 2026 The dioph Authors
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <algorithm>
#include <cmath>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <utility>

#include "dioph/certified_real.hpp"
#include "dioph/types.hpp"

namespace dioph {

/// Precision schedule for certified evaluation. Bits are guard bits on top
/// of the largest binary magnitude occurring in the expression, so that the
/// schedule is meaningful for integers of any size.
struct PrecisionPolicy {
  long start = 128;
  long cap = 16384;

  void validate() const {
    if (start < 8) throw ArgumentError("precision start must be at least 8 bits");
    if (cap < start) throw ArgumentError("precision cap below precision start");
  }
};

enum class Relation { Less, LessEqual, Equal };

enum class Verdict { True, False, ExactEquality };

inline const char* to_string(Verdict v) {
  switch (v) {
    case Verdict::True: return "true";
    case Verdict::False: return "false";
    case Verdict::ExactEquality: return "exact-equality";
  }
  return "?";
}

/// Whether a verdict satisfies the relation it answered.
inline bool holds(Verdict v, Relation rel) {
  if (v == Verdict::True) return true;
  if (v == Verdict::ExactEquality) return rel != Relation::Less;
  return false;
}

struct CertifyResult {
  Verdict verdict;
  long deciding_bits;  // 0 when decided by the exact path
  bool holds(Relation rel) const { return dioph::holds(verdict, rel); }
};

/// Immutable arithmetic expression over rationals, square roots and
/// rational powers.
class Expr {
 public:
  enum class Op { Constant, Add, Sub, Mul, Div, Neg, Sqrt, Pow };

  Expr(const Rational& q) : node_(make(Op::Constant, q, 0, nullptr, nullptr)) {}  // NOLINT
  Expr(const Integer& z) : Expr(Rational(z)) {}                                  // NOLINT
  Expr(long v) : Expr(Rational(v)) {}                                            // NOLINT
  Expr(int v) : Expr(Rational(v)) {}                                             // NOLINT

  Op op() const { return node_->op; }
  const Rational& value() const { return node_->value; }
  const Rational& exponent() const { return node_->exponent; }
  Expr lhs() const { return Expr(node_->a); }
  Expr rhs() const { return Expr(node_->b); }

  friend Expr operator+(const Expr& a, const Expr& b) { return binary(Op::Add, a, b); }
  friend Expr operator-(const Expr& a, const Expr& b) { return binary(Op::Sub, a, b); }
  friend Expr operator*(const Expr& a, const Expr& b) { return binary(Op::Mul, a, b); }
  friend Expr operator/(const Expr& a, const Expr& b) { return binary(Op::Div, a, b); }
  friend Expr operator-(const Expr& a) { return Expr(make(Op::Neg, 0, 0, a.node_, nullptr)); }
  friend Expr sqrt(const Expr& a) { return Expr(make(Op::Sqrt, 0, 0, a.node_, nullptr)); }
  friend Expr pow(const Expr& a, const Rational& e) {
    return Expr(make(Op::Pow, 0, e, a.node_, nullptr));
  }

 private:
  struct Node {
    Op op;
    Rational value;
    Rational exponent;
    std::shared_ptr<const Node> a, b;
  };
  explicit Expr(std::shared_ptr<const Node> n) : node_(std::move(n)) {}
  static std::shared_ptr<const Node> make(Op op, const Rational& v, const Rational& e,
                                          std::shared_ptr<const Node> a,
                                          std::shared_ptr<const Node> b) {
    return std::make_shared<const Node>(Node{op, v, e, std::move(a), std::move(b)});
  }
  static Expr binary(Op op, const Expr& a, const Expr& b) {
    return Expr(make(op, 0, 0, a.node_, b.node_));
  }
  std::shared_ptr<const Node> node_;
};

/// Exact normal form sum of c * sqrt(m) with m >= 1 integer. Two radicands
/// are kept distinct only when their product is not a perfect square, so a
/// nonempty normal form is a nonzero real number.
class RadicalSum {
 public:
  static constexpr std::size_t kMaxTerms = 16;

  static RadicalSum rational(const Rational& q) {
    RadicalSum s;
    if (q != 0) s.terms_.emplace(Integer(1), q);
    return s;
  }
  /// sqrt(q) for rational q >= 0.
  static RadicalSum sqrt_of(const Rational& q) {
    if (q < 0) throw ArgumentError("square root of a negative rational");
    RadicalSum s;
    if (q == 0) return s;
    Integer m = q.get_num() * q.get_den();
    s.insert(m, Rational(1, q.get_den()));
    return s;
  }

  bool is_zero() const { return terms_.empty(); }
  std::size_t size() const { return terms_.size(); }
  const std::map<Integer, Rational>& terms() const { return terms_; }

  std::optional<Rational> as_rational() const {
    if (terms_.empty()) return Rational(0);
    if (terms_.size() == 1 && terms_.begin()->first == 1) return terms_.begin()->second;
    return std::nullopt;
  }

  /// Sign when decidable without numerics: all coefficients of equal sign.
  std::optional<int> exact_sign() const {
    if (terms_.empty()) return 0;
    int s = sgn(terms_.begin()->second);
    for (const auto& [m, c] : terms_)
      if (sgn(c) != s) return std::nullopt;
    return s;
  }

  void insert(Integer m, Rational c) {
    if (c == 0) return;
    if (m <= 0) throw ArgumentError("nonpositive radicand");
    if (is_perfect_square(m)) {
      c *= isqrt(m);
      m = 1;
    }
    for (auto it = terms_.begin(); it != terms_.end(); ++it) {
      Integer prod = m * it->first;
      if (is_perfect_square(prod)) {
        Rational moved = c * Rational(isqrt(prod), it->first);
        moved.canonicalize();
        it->second += moved;
        if (it->second == 0) terms_.erase(it);
        return;
      }
    }
    terms_.emplace(std::move(m), std::move(c));
  }

  friend RadicalSum operator+(RadicalSum a, const RadicalSum& b) {
    for (const auto& [m, c] : b.terms_) a.insert(m, c);
    return a;
  }
  friend RadicalSum operator-(const RadicalSum& a) {
    RadicalSum r = a;
    for (auto& [m, c] : r.terms_) c = -c;
    return r;
  }
  friend RadicalSum operator-(const RadicalSum& a, const RadicalSum& b) { return a + (-b); }
  friend RadicalSum operator*(const RadicalSum& a, const RadicalSum& b) {
    RadicalSum r;
    for (const auto& [m1, c1] : a.terms_)
      for (const auto& [m2, c2] : b.terms_) r.insert(m1 * m2, c1 * c2);
    return r;
  }

  CertifiedReal evaluate(mpfr_prec_t prec) const {
    CertifiedReal acc = CertifiedReal::from_integer(0, prec);
    for (const auto& [m, c] : terms_) {
      CertifiedReal t = CertifiedReal::from_rational(c, prec);
      if (m != 1) t = t * sqrt(CertifiedReal::from_integer(m, prec));
      acc = acc + t;
    }
    return acc;
  }

 private:
  std::map<Integer, Rational> terms_;
};

namespace detail {

inline double log2_abs(const Rational& q) {
  if (q == 0) return 0.0;
  return static_cast<double>(bit_length(q.get_num())) - static_cast<double>(bit_length(q.get_den()));
}

/// Upper estimate of log2|value| for every node; returns the node's estimate
/// and raises peak to the largest absolute estimate seen.
inline double magnitude(const Expr& e, double& peak) {
  double r = 0.0;
  switch (e.op()) {
    case Expr::Op::Constant:
      r = log2_abs(e.value());
      peak = std::max(peak, std::fabs(r));
      peak = std::max(peak, static_cast<double>(bit_length(e.value().get_den())));
      return r;
    case Expr::Op::Add:
    case Expr::Op::Sub:
      r = std::max(magnitude(e.lhs(), peak), magnitude(e.rhs(), peak)) + 1.0;
      break;
    case Expr::Op::Mul:
      r = magnitude(e.lhs(), peak) + magnitude(e.rhs(), peak);
      break;
    case Expr::Op::Div:
      r = magnitude(e.lhs(), peak) - magnitude(e.rhs(), peak);
      break;
    case Expr::Op::Neg:
      r = magnitude(e.lhs(), peak);
      break;
    case Expr::Op::Sqrt:
      r = magnitude(e.lhs(), peak) / 2.0;
      break;
    case Expr::Op::Pow:
      r = magnitude(e.lhs(), peak) * e.exponent().get_d();
      break;
  }
  peak = std::max(peak, std::fabs(r));
  return r;
}

/// Exact rational b-th root, if any.
inline std::optional<Rational> exact_root(const Rational& q, unsigned long b) {
  if (q < 0) return std::nullopt;
  Integer rn, rd;
  int en = mpz_root(rn.get_mpz_t(), q.get_num().get_mpz_t(), b);
  int ed = mpz_root(rd.get_mpz_t(), q.get_den().get_mpz_t(), b);
  if (!en || !ed) return std::nullopt;
  Rational r(rn, rd);
  r.canonicalize();
  return r;
}

inline std::optional<RadicalSum> exact_pow(const RadicalSum& base, const Rational& e) {
  if (base.size() > 1) return std::nullopt;
  if (base.is_zero()) {
    if (e > 0) return RadicalSum();
    return std::nullopt;
  }
  const auto& [m, c] = *base.terms().begin();
  if (c < 0) return std::nullopt;
  // (c sqrt m)^e = Q^(e/2) with Q = c^2 m.
  Rational Q = c * c * Rational(m);
  Rational half = e / 2;
  half.canonicalize();
  Integer a = half.get_num();
  Integer b = half.get_den();
  if (a < 0) {
    Q = 1 / Q;
    a = -a;
  }
  if (!a.fits_ulong_p() || !b.fits_ulong_p()) return std::nullopt;
  unsigned long au = a.get_ui(), bu = b.get_ui();
  const double cost = static_cast<double>(au) * (bit_length(Q.get_num()) + bit_length(Q.get_den()));
  if (cost > 4.0e6 || bu > 1024) return std::nullopt;
  Rational Qa = pow_int(Q, au);
  if (auto r = exact_root(Qa, bu)) return RadicalSum::rational(*r);
  if (auto r = exact_root(pow_int(Qa, 2), bu)) return RadicalSum::sqrt_of(*r);
  return std::nullopt;
}

inline std::optional<RadicalSum> exact_form(const Expr& e) {
  using Op = Expr::Op;
  auto capped = [](RadicalSum s) -> std::optional<RadicalSum> {
    if (s.size() > RadicalSum::kMaxTerms) return std::nullopt;
    return s;
  };
  switch (e.op()) {
    case Op::Constant:
      return RadicalSum::rational(e.value());
    case Op::Neg: {
      auto a = exact_form(e.lhs());
      if (!a) return std::nullopt;
      return -*a;
    }
    case Op::Add:
    case Op::Sub:
    case Op::Mul:
    case Op::Div: {
      auto a = exact_form(e.lhs());
      if (!a) return std::nullopt;
      auto b = exact_form(e.rhs());
      if (!b) return std::nullopt;
      if (e.op() == Op::Add) return capped(*a + *b);
      if (e.op() == Op::Sub) return capped(*a - *b);
      if (e.op() == Op::Mul) return capped(*a * *b);
      if (b->size() != 1) return std::nullopt;
      const auto& [m, c] = *b->terms().begin();
      RadicalSum inv;
      inv.insert(m, 1 / (c * Rational(m)));
      return capped(*a * inv);
    }
    case Op::Sqrt: {
      auto a = exact_form(e.lhs());
      if (!a) return std::nullopt;
      auto q = a->as_rational();
      if (!q) return exact_pow(*a, Rational(1, 2));
      if (*q < 0) throw ArgumentError("square root of a negative value");
      return RadicalSum::sqrt_of(*q);
    }
    case Op::Pow: {
      auto a = exact_form(e.lhs());
      if (!a) return std::nullopt;
      return exact_pow(*a, e.exponent());
    }
  }
  return std::nullopt;
}

inline CertifiedReal evaluate(const Expr& e, mpfr_prec_t prec) {
  using Op = Expr::Op;
  switch (e.op()) {
    case Op::Constant: return CertifiedReal::from_rational(e.value(), prec);
    case Op::Add: return evaluate(e.lhs(), prec) + evaluate(e.rhs(), prec);
    case Op::Sub: return evaluate(e.lhs(), prec) - evaluate(e.rhs(), prec);
    case Op::Mul: return evaluate(e.lhs(), prec) * evaluate(e.rhs(), prec);
    case Op::Div: return evaluate(e.lhs(), prec) / evaluate(e.rhs(), prec);
    case Op::Neg: return -evaluate(e.lhs(), prec);
    case Op::Sqrt: return sqrt(evaluate(e.lhs(), prec));
    case Op::Pow: return pow(evaluate(e.lhs(), prec), e.exponent());
  }
  throw ArgumentError("malformed expression");
}

inline long working_precision(const Expr& e, long guard_bits) {
  double peak = 0.0;
  magnitude(e, peak);
  double mag = std::min(peak, 1.0e9);
  return guard_bits + static_cast<long>(std::ceil(mag)) + 64;
}

}  // namespace detail

/// Enclosure of e with at least `guard_bits` bits beyond its largest
/// intermediate magnitude.
inline CertifiedReal enclose(const Expr& e, long guard_bits) {
  return detail::evaluate(e, detail::working_precision(e, guard_bits));
}

/// Decides `lhs rel rhs`. ExactEquality is returned whenever the exact path
/// proves the two sides equal, regardless of `rel`.
inline CertifyResult certify(const Expr& lhs, Relation rel, const Expr& rhs,
                             const PrecisionPolicy& policy = {}) {
  policy.validate();
  Expr diff = lhs - rhs;
  auto from_sign = [rel](int s) {
    if (s == 0) return Verdict::ExactEquality;
    if (s < 0) return rel == Relation::Equal ? Verdict::False : Verdict::True;
    return Verdict::False;
  };
  if (auto exact = detail::exact_form(diff)) {
    if (auto s = exact->exact_sign()) return {from_sign(*s), 0};
  }
  for (long bits = policy.start;; bits *= 2) {
    bits = std::min(bits, policy.cap);
    try {
      CertifiedReal v = enclose(diff, bits);
      if (v.negative()) return {from_sign(-1), bits};
      if (v.positive()) return {from_sign(1), bits};
    } catch (const DegeneracyError&) {
      // Divisor enclosure straddles zero at this precision.
    }
    if (bits >= policy.cap) break;
  }
  throw UndecidableAtCap("comparison undecided at " + std::to_string(policy.cap) + " guard bits");
}

/// Sign of e, certified.
inline int certified_sign(const Expr& e, const PrecisionPolicy& policy = {}) {
  CertifyResult r = certify(e, Relation::Less, Expr(0), policy);
  if (r.verdict == Verdict::ExactEquality) return 0;
  if (r.verdict == Verdict::True) return -1;
  return 1;
}

struct CertifiedFloor {
  Integer value;
  long deciding_bits;  // 0 when exact
};

/// floor(e), certified: exact when e has a rational normal form, otherwise by
/// escalating precision until both endpoints share a floor.
inline CertifiedFloor certified_floor(const Expr& e, const PrecisionPolicy& policy = {}) {
  policy.validate();
  if (auto exact = detail::exact_form(e)) {
    if (auto q = exact->as_rational()) return {floor(*q), 0};
  }
  for (long bits = policy.start;; bits *= 2) {
    bits = std::min(bits, policy.cap);
    try {
      CertifiedReal v = enclose(e, bits);
      Integer lo = v.floor_lo();
      if (lo == v.floor_hi()) return {lo, bits};
    } catch (const DegeneracyError&) {
    }
    if (bits >= policy.cap) break;
  }
  throw UndecidableAtCap("floor undecided at " + std::to_string(policy.cap) + " guard bits");
}

}  // namespace dioph
