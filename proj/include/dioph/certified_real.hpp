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

#include <mpfr.h>

#include <algorithm>
#include <cstdint>
#include <cstdio>
#include <cstdlib>
#include <string>
#include <utility>

#include "dioph/types.hpp"

namespace dioph {

/// Owning wrapper around an mpfr_t.
class BigFloat {
 public:
  explicit BigFloat(mpfr_prec_t prec = 64) {
    mpfr_init2(v_, prec);
    mpfr_set_zero(v_, 1);
  }
  BigFloat(const BigFloat& o) {
    mpfr_init2(v_, mpfr_get_prec(o.v_));
    mpfr_set(v_, o.v_, MPFR_RNDN);
  }
  BigFloat(BigFloat&& o) noexcept {
    mpfr_init2(v_, MPFR_PREC_MIN);
    mpfr_swap(v_, o.v_);
  }
  BigFloat& operator=(const BigFloat& o) {
    if (this != &o) {
      mpfr_set_prec(v_, mpfr_get_prec(o.v_));
      mpfr_set(v_, o.v_, MPFR_RNDN);
    }
    return *this;
  }
  BigFloat& operator=(BigFloat&& o) noexcept {
    mpfr_swap(v_, o.v_);
    return *this;
  }
  ~BigFloat() { mpfr_clear(v_); }

  mpfr_ptr get() { return v_; }
  mpfr_srcptr get() const { return v_; }
  mpfr_prec_t prec() const { return mpfr_get_prec(v_); }
  double to_double() const { return mpfr_get_d(v_, MPFR_RNDN); }

  /// Exact hexadecimal representation ("%Ra"); reading it back at the same
  /// precision reproduces the value bit for bit.
  std::string to_hex() const {
    char* buf = nullptr;
    mpfr_asprintf(&buf, "%Ra", v_);
    std::string s(buf);
    mpfr_free_str(buf);
    return s;
  }
  static BigFloat from_hex(const std::string& s, mpfr_prec_t prec) {
    BigFloat f(prec);
    if (mpfr_set_str(f.v_, s.c_str(), 0, MPFR_RNDN) != 0)
      throw ArgumentError("malformed binary float '" + s + "'");
    return f;
  }
  std::string to_decimal(int digits) const {
    char* buf = nullptr;
    std::string fmt = "%." + std::to_string(digits) + "Rg";
    mpfr_asprintf(&buf, fmt.c_str(), v_);
    std::string s(buf);
    mpfr_free_str(buf);
    return s;
  }

 private:
  mpfr_t v_;
};

/// Closed interval [lo, hi] of binary floats, maintained with outward
/// rounding so that it always encloses the exact value it represents.
class CertifiedReal {
 public:
  explicit CertifiedReal(mpfr_prec_t prec = 64) : lo_(prec), hi_(prec) {}

  static CertifiedReal from_integer(const Integer& z, mpfr_prec_t prec) {
    CertifiedReal r(prec);
    mpfr_set_z(r.lo_.get(), z.get_mpz_t(), MPFR_RNDD);
    mpfr_set_z(r.hi_.get(), z.get_mpz_t(), MPFR_RNDU);
    return r;
  }
  static CertifiedReal from_rational(const Rational& q, mpfr_prec_t prec) {
    CertifiedReal r(prec);
    mpfr_set_q(r.lo_.get(), q.get_mpq_t(), MPFR_RNDD);
    mpfr_set_q(r.hi_.get(), q.get_mpq_t(), MPFR_RNDU);
    return r;
  }
  static CertifiedReal from_double(double x, mpfr_prec_t prec) {
    CertifiedReal r(prec);
    mpfr_set_d(r.lo_.get(), x, MPFR_RNDD);
    mpfr_set_d(r.hi_.get(), x, MPFR_RNDU);
    return r;
  }
  static CertifiedReal from_bounds(BigFloat lo, BigFloat hi) {
    if (mpfr_cmp(lo.get(), hi.get()) > 0) throw ArgumentError("interval with lo > hi");
    CertifiedReal r(std::max(lo.prec(), hi.prec()));
    r.lo_ = std::move(lo);
    r.hi_ = std::move(hi);
    return r;
  }
  /// Hull of two enclosures.
  static CertifiedReal hull(const CertifiedReal& a, const CertifiedReal& b) {
    CertifiedReal r(std::max(a.prec(), b.prec()));
    mpfr_min(r.lo_.get(), a.lo_.get(), b.lo_.get(), MPFR_RNDD);
    mpfr_max(r.hi_.get(), a.hi_.get(), b.hi_.get(), MPFR_RNDU);
    return r;
  }

  const BigFloat& lower() const { return lo_; }
  const BigFloat& upper() const { return hi_; }
  mpfr_prec_t prec() const { return std::max(lo_.prec(), hi_.prec()); }

  double lo_double() const { return mpfr_get_d(lo_.get(), MPFR_RNDD); }
  double hi_double() const { return mpfr_get_d(hi_.get(), MPFR_RNDU); }
  double mid_double() const {
    BigFloat m(prec() + 1);
    mpfr_add(m.get(), lo_.get(), hi_.get(), MPFR_RNDN);
    mpfr_div_2ui(m.get(), m.get(), 1, MPFR_RNDN);
    return m.to_double();
  }

  bool is_point() const { return mpfr_equal_p(lo_.get(), hi_.get()) != 0; }
  bool contains_zero() const { return mpfr_sgn(lo_.get()) <= 0 && mpfr_sgn(hi_.get()) >= 0; }
  bool positive() const { return mpfr_sgn(lo_.get()) > 0; }
  bool negative() const { return mpfr_sgn(hi_.get()) < 0; }
  bool nonnegative() const { return mpfr_sgn(lo_.get()) >= 0; }
  bool is_exact_zero() const { return mpfr_zero_p(lo_.get()) && mpfr_zero_p(hi_.get()); }
  /// Certified strict order: every point of *this is below every point of o.
  bool certainly_less(const CertifiedReal& o) const {
    return mpfr_less_p(hi_.get(), o.lo_.get()) != 0;
  }
  bool disjoint(const CertifiedReal& o) const { return certainly_less(o) || o.certainly_less(*this); }
  bool contains(const CertifiedReal& o) const {
    return mpfr_lessequal_p(lo_.get(), o.lo_.get()) && mpfr_lessequal_p(o.hi_.get(), hi_.get());
  }
  bool contains(const Rational& q) const {
    return mpfr_cmp_q(lo_.get(), q.get_mpq_t()) <= 0 && mpfr_cmp_q(hi_.get(), q.get_mpq_t()) >= 0;
  }
  bool intersects(const CertifiedReal& o) const { return !disjoint(o); }

  /// Width hi - lo, rounded up.
  double width_double() const {
    BigFloat w(53);
    mpfr_sub(w.get(), hi_.get(), lo_.get(), MPFR_RNDU);
    return mpfr_get_d(w.get(), MPFR_RNDU);
  }
  /// Binary exponent of max(|lo|, |hi|); 0 for the zero interval.
  long magnitude_exponent() const {
    long e = 0;
    if (!mpfr_zero_p(lo_.get())) e = std::max<long>(e, mpfr_get_exp(lo_.get()));
    if (!mpfr_zero_p(hi_.get())) e = std::max<long>(e, mpfr_get_exp(hi_.get()));
    return e;
  }

  std::string to_string(int digits = 17) const {
    return "[" + lo_.to_decimal(digits) + ", " + hi_.to_decimal(digits) + "]";
  }

  friend CertifiedReal operator-(const CertifiedReal& a) {
    CertifiedReal r(a.prec());
    mpfr_neg(r.lo_.get(), a.hi_.get(), MPFR_RNDD);
    mpfr_neg(r.hi_.get(), a.lo_.get(), MPFR_RNDU);
    return r;
  }
  friend CertifiedReal operator+(const CertifiedReal& a, const CertifiedReal& b) {
    CertifiedReal r(std::max(a.prec(), b.prec()));
    mpfr_add(r.lo_.get(), a.lo_.get(), b.lo_.get(), MPFR_RNDD);
    mpfr_add(r.hi_.get(), a.hi_.get(), b.hi_.get(), MPFR_RNDU);
    return r;
  }
  friend CertifiedReal operator-(const CertifiedReal& a, const CertifiedReal& b) {
    CertifiedReal r(std::max(a.prec(), b.prec()));
    mpfr_sub(r.lo_.get(), a.lo_.get(), b.hi_.get(), MPFR_RNDD);
    mpfr_sub(r.hi_.get(), a.hi_.get(), b.lo_.get(), MPFR_RNDU);
    return r;
  }
  friend CertifiedReal operator*(const CertifiedReal& a, const CertifiedReal& b) {
    mpfr_prec_t p = std::max(a.prec(), b.prec());
    CertifiedReal r(p);
    BigFloat t(p);
    const BigFloat* xs[2] = {&a.lo_, &a.hi_};
    const BigFloat* ys[2] = {&b.lo_, &b.hi_};
    bool first = true;
    for (auto* x : xs) {
      for (auto* y : ys) {
        mpfr_mul(t.get(), x->get(), y->get(), MPFR_RNDD);
        if (first || mpfr_less_p(t.get(), r.lo_.get())) mpfr_set(r.lo_.get(), t.get(), MPFR_RNDD);
        mpfr_mul(t.get(), x->get(), y->get(), MPFR_RNDU);
        if (first || mpfr_greater_p(t.get(), r.hi_.get())) mpfr_set(r.hi_.get(), t.get(), MPFR_RNDU);
        first = false;
      }
    }
    return r;
  }
  friend CertifiedReal operator/(const CertifiedReal& a, const CertifiedReal& b) {
    if (b.contains_zero()) throw DegeneracyError("division by an interval containing zero");
    mpfr_prec_t p = std::max(a.prec(), b.prec());
    CertifiedReal r(p);
    BigFloat t(p);
    const BigFloat* xs[2] = {&a.lo_, &a.hi_};
    const BigFloat* ys[2] = {&b.lo_, &b.hi_};
    bool first = true;
    for (auto* x : xs) {
      for (auto* y : ys) {
        mpfr_div(t.get(), x->get(), y->get(), MPFR_RNDD);
        if (first || mpfr_less_p(t.get(), r.lo_.get())) mpfr_set(r.lo_.get(), t.get(), MPFR_RNDD);
        mpfr_div(t.get(), x->get(), y->get(), MPFR_RNDU);
        if (first || mpfr_greater_p(t.get(), r.hi_.get())) mpfr_set(r.hi_.get(), t.get(), MPFR_RNDU);
        first = false;
      }
    }
    return r;
  }

  friend CertifiedReal abs(const CertifiedReal& a) {
    if (a.nonnegative()) return a;
    if (a.negative()) return -a;
    CertifiedReal r(a.prec());
    mpfr_set_zero(r.lo_.get(), 1);
    mpfr_neg(r.hi_.get(), a.lo_.get(), MPFR_RNDU);
    if (mpfr_less_p(r.hi_.get(), a.hi_.get())) mpfr_set(r.hi_.get(), a.hi_.get(), MPFR_RNDU);
    return r;
  }

  /// Square root; a lower endpoint below zero is clamped (radicands are
  /// nonnegative by contract, so only rounding can push lo below 0).
  friend CertifiedReal sqrt(const CertifiedReal& a) {
    if (a.negative()) throw ArgumentError("square root of a negative enclosure");
    CertifiedReal r(a.prec());
    if (mpfr_sgn(a.lo_.get()) <= 0)
      mpfr_set_zero(r.lo_.get(), 1);
    else
      mpfr_sqrt(r.lo_.get(), a.lo_.get(), MPFR_RNDD);
    mpfr_sqrt(r.hi_.get(), a.hi_.get(), MPFR_RNDU);
    return r;
  }
  friend CertifiedReal log(const CertifiedReal& a) {
    if (!a.positive()) throw ArgumentError("logarithm of an enclosure not certified positive");
    CertifiedReal r(a.prec());
    mpfr_log(r.lo_.get(), a.lo_.get(), MPFR_RNDD);
    mpfr_log(r.hi_.get(), a.hi_.get(), MPFR_RNDU);
    return r;
  }
  friend CertifiedReal exp(const CertifiedReal& a) {
    CertifiedReal r(a.prec());
    mpfr_exp(r.lo_.get(), a.lo_.get(), MPFR_RNDD);
    mpfr_exp(r.hi_.get(), a.hi_.get(), MPFR_RNDU);
    return r;
  }
  /// a^e for a > 0 evaluated as exp(e log a); e = 0 gives exactly 1.
  friend CertifiedReal pow(const CertifiedReal& a, const Rational& e) {
    mpfr_prec_t p = a.prec();
    if (e == 0) return from_integer(1, p);
    if (a.is_exact_zero() && e > 0) return CertifiedReal(p);
    if (!a.positive()) {
      if (e > 0 && a.nonnegative()) {
        CertifiedReal upper = from_bounds(a.hi_, a.hi_);
        CertifiedReal u = exp(from_rational(e, p) * log(upper));
        BigFloat zero(p);
        return from_bounds(std::move(zero), u.hi_);
      }
      throw ArgumentError("power of an enclosure not certified positive");
    }
    return exp(from_rational(e, p) * log(a));
  }
  /// Integer power by repeated squaring (valid for any sign of a).
  friend CertifiedReal pow_ui(const CertifiedReal& a, unsigned long n) {
    CertifiedReal result = from_integer(1, a.prec());
    CertifiedReal base = a;
    while (n > 0) {
      if (n & 1) result = result * base;
      n >>= 1;
      if (n > 0) base = base * base;
    }
    return result;
  }

  /// Floors of the endpoints.
  Integer floor_lo() const {
    Integer z;
    mpfr_get_z(z.get_mpz_t(), lo_.get(), MPFR_RNDD);
    return z;
  }
  Integer floor_hi() const {
    Integer z;
    mpfr_get_z(z.get_mpz_t(), hi_.get(), MPFR_RNDD);
    return z;
  }
  /// True when lo >= q (certified lower bound test).
  bool lo_at_least(const Integer& q) const { return mpfr_cmp_z(lo_.get(), q.get_mpz_t()) >= 0; }
  bool hi_below(const Rational& q) const { return mpfr_cmp_q(hi_.get(), q.get_mpq_t()) < 0; }
  bool lo_above(const Rational& q) const { return mpfr_cmp_q(lo_.get(), q.get_mpq_t()) > 0; }

 private:
  BigFloat lo_;
  BigFloat hi_;
};

/// Bit length of |z| (0 for z = 0).
inline long bit_length(const Integer& z) {
  if (z == 0) return 0;
  return static_cast<long>(mpz_sizeinbase(z.get_mpz_t(), 2));
}

/// Natural logarithm of a positive integer as an enclosure.
inline CertifiedReal log_of(const Integer& z, mpfr_prec_t prec) {
  return log(CertifiedReal::from_integer(z, prec));
}

inline CertifiedReal log_of(const Rational& q, mpfr_prec_t prec) {
  return log(CertifiedReal::from_rational(q, prec));
}

}  // namespace dioph
