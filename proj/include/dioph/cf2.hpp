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

#include <cmath>
#include <cstdint>
#include <limits>
#include <optional>
#include <set>
#include <utility>
#include <vector>

#include "dioph/types.hpp"

namespace dioph {

/// Partial quotients a_0..a_N with convergents p_n / q_n, n = 0..N.
struct CFState {
  std::vector<Integer> a;
  std::vector<Integer> p, q;
  std::optional<Rational> beta;  // set for built sequences

  std::size_t size() const { return a.size(); }
  Rational convergent(std::size_t n) const {
    Rational r(p[n], q[n]);
    r.canonicalize();
    return r;
  }

  void push(const Integer& an) {
    const std::size_t n = a.size();
    a.push_back(an);
    Integer pm1 = n >= 1 ? p[n - 1] : Integer(1), qm1 = n >= 1 ? q[n - 1] : Integer(0);
    Integer pm2 = n >= 2 ? p[n - 2] : Integer(n == 1 ? 1 : 0), qm2 = n >= 2 ? q[n - 2] : Integer(n == 1 ? 0 : 1);
    if (n == 0) {
      p.push_back(an);
      q.push_back(1);
    } else {
      p.push_back(an * pm1 + pm2);
      q.push_back(an * qm1 + qm2);
    }
  }
};

/// Continued fraction of a rational number.
inline CFState cf_expand(const Rational& x) {
  CFState cf;
  Integer num = x.get_num(), den = x.get_den();
  while (den != 0) {
    Integer t = floor_div(num, den);
    cf.push(t);
    Integer r = num - t * den;
    num = den;
    den = r;
  }
  return cf;
}

/// round(q^beta) for q >= 1, ties upward, exact.
inline Integer round_power(const Integer& q, const Rational& beta) {
  if (q < 1) throw ArgumentError("round_power needs q >= 1");
  if (beta < 0) throw ArgumentError("round_power needs beta >= 0");
  const unsigned long num = beta.get_num().get_ui(), den = beta.get_den().get_ui();
  Integer x = pow_int(q, num);
  Integer m;
  mpz_root(m.get_mpz_t(), x.get_mpz_t(), den);  // floor(x^{1/den})
  // x^{1/den} >= m + 1/2  iff  2^den x >= (2m + 1)^den
  Integer lhs = x << den;
  Integer rhs = pow_int(Integer(2 * m + 1), den);
  return lhs >= rhs ? Integer(m + 1) : m;
}

/// a_0 = 0 and a_{n+1} = max(1, round(q_n^beta)) for n = 0..N-1.
inline CFState cf2_build(const Rational& beta, long N) {
  if (N < 3) throw ArgumentError("cf2_build needs N >= 3");
  if (beta < 0) throw ArgumentError("cf2_build needs beta >= 0");
  if (!beta.get_num().fits_ulong_p() || !beta.get_den().fits_ulong_p() || beta.get_den() > 1024)
    throw ArgumentError("beta numerator and denominator out of range");
  CFState cf;
  cf.beta = beta;
  cf.push(0);
  for (long n = 0; n < N; ++n) cf.push(std::max(Integer(1), round_power(cf.q.back(), beta)));
  return cf;
}

/// Continues a built sequence with the same rule until q_N > bound.
inline CFState cf2_extend(CFState cf, const Integer& bound) {
  if (!cf.beta) throw ArgumentError("only built sequences can be extended");
  while (cf.q.back() <= bound) cf.push(std::max(Integer(1), round_power(cf.q.back(), *cf.beta)));
  return cf;
}

struct MuEstimate {
  long n;
  double value;  // 2 + ln a_{n+1} / ln q_n
};

struct LegendreReport {
  long Q = 0;
  std::uint64_t examined = 0;
  std::uint64_t violations = 0;            // q |q alpha - p| < 1/2, certified
  std::uint64_t convergent_violations = 0; // of those, multiples of convergents
  std::uint64_t nonconvergent_violations = 0;
  std::uint64_t indeterminate = 0;
  double min_nonconvergent = std::numeric_limits<double>::infinity();  // min q |q alpha - p|
  long min_at_q = 0;
};

struct CF2Report {
  bool determinant_ok = true;  // p_n q_{n+1} - p_{n+1} q_n = (-1)^{n+1}
  bool recurrence_ok = true;
  std::vector<MuEstimate> mu;
  double mu_hat = 0.0;  // at the last available n
  double mu_target = 0.0;
  // log(q_n ||q_n alpha||) against log q_n.
  std::vector<std::pair<double, double>> scaling;
  double slope = 0.0;
  double slope_target = 0.0;
  LegendreReport legendre;
};

namespace detail {

inline double ln(const Integer& z) {
  long e = 0;
  double m = mpz_get_d_2exp(&e, z.get_mpz_t());
  return std::log(m) + static_cast<double>(e) * std::log(2.0);
}

inline double ln(const Rational& x) { return ln(Integer(x.get_num())) - ln(Integer(x.get_den())); }

}  // namespace detail

/// Checks a built sequence; the Legendre scan covers 1 <= q <= Q.
inline CF2Report cf2_verify(const CFState& cf, long Q = 10000) {
  CF2Report r;
  const std::size_t N = cf.size() - 1;
  for (std::size_t n = 0; n + 1 <= N; ++n) {
    Integer det = cf.p[n] * cf.q[n + 1] - cf.p[n + 1] * cf.q[n];
    Integer expect = (n % 2 == 0) ? Integer(-1) : Integer(1);
    if (det != expect) r.determinant_ok = false;
    if (n >= 1 && (cf.q[n + 1] != cf.a[n + 1] * cf.q[n] + cf.q[n - 1] || cf.p[n + 1] != cf.a[n + 1] * cf.p[n] + cf.p[n - 1]))
      r.recurrence_ok = false;
  }
  for (std::size_t n = 1; n + 1 <= N; ++n)
    if (cf.q[n] >= 2) r.mu.push_back({static_cast<long>(n), 2.0 + detail::ln(cf.a[n + 1]) / detail::ln(cf.q[n])});
  if (!r.mu.empty()) r.mu_hat = r.mu.back().value;
  if (cf.beta) {
    r.mu_target = cf.beta->get_d() + 2.0;
    r.slope_target = -cf.beta->get_d();
  }

  // Scaling of ||q_n alpha|| for n <= N - 2 against alpha_hat = p_N / q_N,
  // whose error 1 / q_N^2 is negligible there.
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  long cnt = 0;
  const double lnqN = detail::ln(cf.q[N]);
  for (std::size_t n = 1; n + 2 <= N; ++n) {
    if (cf.q[n] < 2) continue;
    Integer num = abs(Integer(cf.q[n] * cf.p[N] - cf.p[n] * cf.q[N]));
    double x = detail::ln(cf.q[n]);
    double y = x + detail::ln(num) - lnqN;
    r.scaling.emplace_back(x, y);
    sx += x;
    sy += y;
    sxx += x * x;
    sxy += x * y;
    ++cnt;
  }
  if (cnt >= 2) r.slope = (cnt * sxy - sx * sy) / (cnt * sxx - sx * sx);

  // Legendre scan against the shortest prefix p_M / q_M with q_M > 2^20 Q^2,
  // so that |alpha - p_M / q_M| < 1 / q_M^2 is negligible.
  const Integer bound = (Integer(1) << 20) * Integer(Q) * Integer(Q);
  CFState ext;
  ext.beta = cf.beta;
  for (std::size_t n = 0; n < cf.size() && (ext.size() == 0 || ext.q.back() <= bound); ++n) ext.push(cf.a[n]);
  if (ext.q.back() <= bound) {
    if (!cf.beta) throw InsufficientData("sequence too short for the Legendre scan");
    ext = cf2_extend(ext, bound);
  }
  const std::size_t M = ext.size() - 1;
  const Rational alpha = ext.convergent(M);
  const Rational err = Rational(1, ext.q[M] * ext.q[M]);

  std::set<std::pair<Integer, Integer>> convergents;
  for (std::size_t n = 0; n <= M; ++n) {
    Rational c = ext.convergent(n);
    convergents.insert({c.get_num(), c.get_den()});
  }
  r.legendre.Q = Q;
  const Rational half(1, 2);
  for (long qi = 1; qi <= Q; ++qi) {
    Integer q(qi);
    Rational qa = q * alpha;
    // Only the nearest p can reach q |q alpha - p| < 1/2.
    Integer p = floor(Rational(qa + half));
    Rational v = q * abs(Rational(qa - p));
    Rational e = q * q * err;
    ++r.legendre.examined;
    Rational red(p, q);
    red.canonicalize();
    bool conv = convergents.count({red.get_num(), red.get_den()}) > 0;
    if (v + e < half) {
      ++r.legendre.violations;
      if (conv)
        ++r.legendre.convergent_violations;
      else
        ++r.legendre.nonconvergent_violations;
    } else if (v - e < half) {
      ++r.legendre.indeterminate;
    }
    if (!conv && v.get_d() < r.legendre.min_nonconvergent) {
      r.legendre.min_nonconvergent = v.get_d();
      r.legendre.min_at_q = qi;
    }
  }
  return r;
}

}  // namespace dioph
