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

#include <gmpxx.h>

#include <cstddef>
#include <cstdint>
#include <initializer_list>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace dioph {

using Integer = mpz_class;
using Rational = mpq_class;

// Error taxonomy shared by every module.
class ArgumentError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// Raised when vectors that must be independent are not (alpha undefined,
// collinear Gram-Schmidt input, ...).
class DegeneracyError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

// A certified comparison could not be decided at the precision cap.
class UndecidableAtCap : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class BudgetExceeded : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class InsufficientData : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A point of Z^n with arbitrary-precision coordinates.
class IntVector {
 public:
  IntVector() = default;
  explicit IntVector(std::vector<Integer> coords) : coords_(std::move(coords)) {}
  IntVector(std::initializer_list<long> coords) {
    coords_.reserve(coords.size());
    for (long c : coords) coords_.emplace_back(c);
  }
  static IntVector zero(std::size_t dim) { return IntVector(std::vector<Integer>(dim)); }
  static IntVector unit(std::size_t dim, std::size_t i) {
    IntVector v = zero(dim);
    v.coords_.at(i) = 1;
    return v;
  }

  std::size_t dim() const { return coords_.size(); }
  const Integer& operator[](std::size_t i) const { return coords_[i]; }
  Integer& operator[](std::size_t i) { return coords_[i]; }
  const std::vector<Integer>& coords() const { return coords_; }
  const Integer& last() const { return coords_.back(); }

  /// Drops the last coordinate.
  IntVector projection() const {
    if (coords_.empty()) throw ArgumentError("projection of an empty vector");
    return IntVector(std::vector<Integer>(coords_.begin(), coords_.end() - 1));
  }

  bool is_zero() const {
    for (const auto& c : coords_)
      if (c != 0) return false;
    return true;
  }

  friend bool operator==(const IntVector& a, const IntVector& b) { return a.coords_ == b.coords_; }

  IntVector& operator+=(const IntVector& o) {
    check_same(o);
    for (std::size_t i = 0; i < coords_.size(); ++i) coords_[i] += o.coords_[i];
    return *this;
  }
  IntVector& operator-=(const IntVector& o) {
    check_same(o);
    for (std::size_t i = 0; i < coords_.size(); ++i) coords_[i] -= o.coords_[i];
    return *this;
  }
  IntVector& operator*=(const Integer& s) {
    for (auto& c : coords_) c *= s;
    return *this;
  }
  friend IntVector operator+(IntVector a, const IntVector& b) { return a += b; }
  friend IntVector operator-(IntVector a, const IntVector& b) { return a -= b; }
  friend IntVector operator*(const Integer& s, IntVector a) { return a *= s; }
  friend IntVector operator-(IntVector a) {
    for (auto& c : a.coords_) c = -c;
    return a;
  }

 private:
  void check_same(const IntVector& o) const {
    if (o.dim() != dim()) throw ArgumentError("dimension mismatch");
  }
  std::vector<Integer> coords_;
};

/// A point of R^n with exact rational coordinates. Form points alpha live on
/// the hyperplane where the last coordinate equals 1.
class RationalPoint {
 public:
  RationalPoint() = default;
  explicit RationalPoint(std::vector<Rational> coords) : coords_(std::move(coords)) {}
  explicit RationalPoint(const IntVector& v) {
    coords_.reserve(v.dim());
    for (const auto& c : v.coords()) coords_.emplace_back(c);
  }

  std::size_t dim() const { return coords_.size(); }
  const Rational& operator[](std::size_t i) const { return coords_[i]; }
  Rational& operator[](std::size_t i) { return coords_[i]; }
  const std::vector<Rational>& coords() const { return coords_; }
  bool on_form_hyperplane() const { return !coords_.empty() && coords_.back() == 1; }

  friend bool operator==(const RationalPoint& a, const RationalPoint& b) {
    return a.coords_ == b.coords_;
  }

 private:
  std::vector<Rational> coords_;
};

inline Integer dot(const IntVector& a, const IntVector& b) {
  if (a.dim() != b.dim()) throw ArgumentError("dimension mismatch in dot product");
  Integer s = 0;
  for (std::size_t i = 0; i < a.dim(); ++i) s += a[i] * b[i];
  return s;
}

inline Integer norm_sq(const IntVector& a) { return dot(a, a); }

inline Rational dot(const RationalPoint& a, const IntVector& b) {
  if (a.dim() != b.dim()) throw ArgumentError("dimension mismatch in dot product");
  Rational s = 0;
  for (std::size_t i = 0; i < a.dim(); ++i) s += a[i] * b[i];
  return s;
}

inline Rational dist_sq(const RationalPoint& a, const RationalPoint& b) {
  if (a.dim() != b.dim()) throw ArgumentError("dimension mismatch in distance");
  Rational s = 0;
  for (std::size_t i = 0; i < a.dim(); ++i) {
    Rational t = a[i] - b[i];
    s += t * t;
  }
  return s;
}

/// Sign canonicalization: first nonzero coordinate of the projection positive.
inline IntVector canonical_sign(const IntVector& v) {
  for (std::size_t i = 0; i + 1 < v.dim(); ++i) {
    int s = sgn(v[i]);
    if (s > 0) return v;
    if (s < 0) return -v;
  }
  return v;
}

inline std::string to_string(const Integer& z) { return z.get_str(); }

/// "p/q", or "p" when the denominator is 1.
inline std::string to_string(const Rational& q) { return q.get_str(); }

inline Integer parse_integer(std::string_view s) {
  Integer z;
  if (s.empty() || z.set_str(std::string(s), 10) != 0)
    throw ArgumentError("not an integer: '" + std::string(s) + "'");
  return z;
}

inline Rational parse_rational(std::string_view s) {
  auto slash = s.find('/');
  Integer num = parse_integer(s.substr(0, slash));
  Integer den = 1;
  if (slash != std::string_view::npos) den = parse_integer(s.substr(slash + 1));
  if (den == 0) throw ArgumentError("zero denominator in '" + std::string(s) + "'");
  Rational q(num, den);
  q.canonicalize();
  return q;
}

inline bool is_perfect_square(const Integer& z) { return z >= 0 && mpz_perfect_square_p(z.get_mpz_t()) != 0; }

inline Integer isqrt(const Integer& z) {
  if (z < 0) throw ArgumentError("isqrt of a negative integer");
  Integer r;
  mpz_sqrt(r.get_mpz_t(), z.get_mpz_t());
  return r;
}

inline Integer pow_int(const Integer& base, unsigned long e) {
  Integer r;
  mpz_pow_ui(r.get_mpz_t(), base.get_mpz_t(), e);
  return r;
}

inline Rational pow_int(const Rational& base, unsigned long e) {
  Rational r(pow_int(base.get_num(), e), pow_int(base.get_den(), e));
  r.canonicalize();
  return r;
}

inline Integer floor_div(const Integer& a, const Integer& b) {
  Integer q;
  mpz_fdiv_q(q.get_mpz_t(), a.get_mpz_t(), b.get_mpz_t());
  return q;
}

inline Integer floor(const Rational& q) { return floor_div(q.get_num(), q.get_den()); }

inline Integer ceil(const Rational& q) {
  Integer r;
  mpz_cdiv_q(r.get_mpz_t(), q.get_num().get_mpz_t(), q.get_den().get_mpz_t());
  return r;
}

}  // namespace dioph
