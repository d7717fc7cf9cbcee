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

#include <cmath>
#include <random>

#include <gtest/gtest.h>

#include "dioph/cf2.hpp"

namespace dioph {
namespace {

Rational q(long p, long r = 1) {
  Rational x(p, r);
  x.canonicalize();
  return x;
}

TEST(CfExpand, KnownExpansions) {
  CFState cf = cf_expand(q(415, 93));
  EXPECT_EQ(cf.a, (std::vector<Integer>{4, 2, 6, 7}));
  EXPECT_EQ(cf.convergent(3), q(415, 93));
  EXPECT_EQ(cf.convergent(1), q(9, 2));
  CFState neg = cf_expand(q(-7, 3));
  EXPECT_EQ(neg.a, (std::vector<Integer>{-3, 1, 2}));
  EXPECT_EQ(neg.convergent(neg.size() - 1), q(-7, 3));
}

TEST(CfExpand, ConvergentsReproduceRandomRationals) {
  std::mt19937_64 rng(31);
  std::uniform_int_distribution<long> u(-100000, 100000), v(1, 100000);
  for (int t = 0; t < 200; ++t) {
    Rational x = q(u(rng), v(rng));
    CFState cf = cf_expand(x);
    EXPECT_EQ(cf.convergent(cf.size() - 1), x);
    for (std::size_t n = 1; n < cf.size(); ++n) EXPECT_GE(cf.a[n], 1);
  }
}

TEST(RoundPower, MatchesFloatingPointAwayFromTies) {
  EXPECT_EQ(round_power(10, q(1, 2)), 3);
  EXPECT_EQ(round_power(13, q(1, 2)), 4);
  EXPECT_EQ(round_power(7, q(1)), 7);
  EXPECT_EQ(round_power(5, q(0)), 1);
  EXPECT_EQ(round_power(1000, q(2, 3)), 100);
  std::mt19937_64 rng(37);
  std::uniform_int_distribution<long> u(1, 1000000), num(0, 9), den(1, 6);
  for (int t = 0; t < 500; ++t) {
    long x = u(rng);
    Rational b = q(num(rng), den(rng));
    double f = std::pow(static_cast<double>(x), b.get_d());
    if (f > 1e9 || std::fabs(f - std::floor(f) - 0.5) < 1e-4) continue;
    EXPECT_EQ(round_power(x, b), Integer(static_cast<long>(std::llround(f)))) << x << "^" << b;
  }
  EXPECT_THROW(round_power(0, q(1)), ArgumentError);
}

TEST(Cf2Build, BetaZeroIsGoldenTail) {
  CFState cf = cf2_build(q(0), 20);
  ASSERT_EQ(cf.size(), 21u);
  EXPECT_EQ(cf.a[0], 0);
  for (std::size_t n = 1; n < cf.size(); ++n) EXPECT_EQ(cf.a[n], 1);
  // q_n are Fibonacci numbers.
  EXPECT_EQ(cf.q[10], 89);
}

TEST(Cf2Build, RuleIsApplied) {
  CFState cf = cf2_build(q(1), 8);
  for (std::size_t n = 0; n + 1 < cf.size(); ++n) EXPECT_EQ(cf.a[n + 1], std::max(Integer(1), cf.q[n]));
  EXPECT_THROW(cf2_build(q(1), 2), ArgumentError);
  EXPECT_THROW(cf2_build(q(-1), 5), ArgumentError);
}

TEST(Cf2Verify, MeasureAndScaling) {
  for (auto [beta, slope_tol] : {std::pair{q(0), 0.05}, std::pair{q(1, 2), 0.05}, std::pair{q(1), 0.05}}) {
    CFState cf = cf2_build(beta, 25);
    CF2Report r = cf2_verify(cf);
    EXPECT_TRUE(r.determinant_ok);
    EXPECT_TRUE(r.recurrence_ok);
    EXPECT_NEAR(r.mu_hat, beta.get_d() + 2, 0.1) << "beta=" << beta;
    EXPECT_DOUBLE_EQ(r.mu_target, beta.get_d() + 2);
    EXPECT_NEAR(r.slope, -beta.get_d(), slope_tol) << "beta=" << beta;
    EXPECT_EQ(r.legendre.examined, 10000u);
    EXPECT_EQ(r.legendre.nonconvergent_violations, 0u);
    EXPECT_EQ(r.legendre.violations, r.legendre.convergent_violations);
    EXPECT_GT(r.legendre.convergent_violations, 0u);
    EXPECT_GE(r.legendre.min_nonconvergent, 0.5);
  }
}

TEST(Cf2Verify, DeterminantIdentityOnExpansions) {
  std::mt19937_64 rng(41);
  std::uniform_int_distribution<long> u(1, 1000000);
  for (int t = 0; t < 50; ++t) {
    CFState cf = cf_expand(q(u(rng), u(rng)));
    if (cf.size() < 2) continue;
    for (std::size_t n = 0; n + 1 < cf.size(); ++n)
      EXPECT_EQ(abs(Integer(cf.p[n] * cf.q[n + 1] - cf.p[n + 1] * cf.q[n])), 1);
  }
}

// Independent Legendre scan in exact arithmetic over a rational alpha: every
// p/q with q |q alpha - p| < 1/2 is a convergent.
TEST(Cf2Verify, LegendreAgainstDirectScan) {
  CFState cf = cf2_build(q(1, 2), 12);
  Rational alpha = cf.convergent(cf.size() - 1);
  CFState ex = cf_expand(alpha);
  std::set<Rational> convergents;
  for (std::size_t n = 0; n < ex.size(); ++n) convergents.insert(ex.convergent(n));
  std::uint64_t count = 0;
  for (long qq = 1; qq <= 2000; ++qq)
    for (Integer p = floor(Rational(qq * alpha)) - 1; p <= floor(Rational(qq * alpha)) + 2; ++p) {
      Rational v = qq * abs(Rational(qq * alpha - p));
      if (v < q(1, 2)) {
        Rational r(p, qq);
        r.canonicalize();
        EXPECT_TRUE(convergents.count(r)) << p << "/" << qq;
        ++count;
      }
    }
  CF2Report r = cf2_verify(cf, 2000);
  EXPECT_EQ(r.legendre.violations, count);
}

}  // namespace
}  // namespace dioph
