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

#include <random>

#include <gtest/gtest.h>

#include "dioph/certify.hpp"

namespace dioph {
namespace {

Rational q(long p, long r = 1) {
  Rational x(p, r);
  x.canonicalize();
  return x;
}

TEST(Certify, Examples) {
  EXPECT_EQ(certify(sqrt(Expr(2)), Relation::Less, Expr(q(3, 2))).verdict, Verdict::True);
  EXPECT_EQ(certify(sqrt(Expr(2)) + sqrt(Expr(8)), Relation::Equal, Expr(3) * sqrt(Expr(2))).verdict,
            Verdict::ExactEquality);
  EXPECT_EQ(certify(Expr(3) * pow(Expr(1), q(2)) / Expr(1), Relation::Equal, Expr(3)).verdict,
            Verdict::ExactEquality);
  EXPECT_EQ(certify(Expr(q(3, 2)), Relation::LessEqual, sqrt(Expr(2))).verdict, Verdict::False);
}

TEST(Certify, ExactPathNeedsNoPrecision) {
  CertifyResult r = certify(sqrt(Expr(12)), Relation::Equal, Expr(2) * sqrt(Expr(3)));
  EXPECT_EQ(r.verdict, Verdict::ExactEquality);
  EXPECT_EQ(r.deciding_bits, 0);
  EXPECT_TRUE(r.holds(Relation::LessEqual));
  EXPECT_FALSE(r.holds(Relation::Less));
}

TEST(Certify, RationalPowers) {
  // 8^{2/3} = 4 exactly; 2^{1/3} < 5/4 < 2^{1/3} * 1.0001 is false.
  EXPECT_EQ(certify(pow(Expr(8), q(2, 3)), Relation::Equal, Expr(4)).verdict, Verdict::ExactEquality);
  EXPECT_EQ(certify(pow(Expr(2), q(1, 3)), Relation::Less, Expr(q(5, 4))).verdict, Verdict::False);
  EXPECT_EQ(certify(pow(Expr(2), q(1, 3)), Relation::Less, Expr(q(126, 100))).verdict, Verdict::True);
}

TEST(Certify, HugeMagnitudesUseRelativePrecision) {
  Integer big = pow_int(Integer(10), 4000) + 1;
  Expr lhs = sqrt(Expr(Rational(big * big + 1)));
  EXPECT_EQ(certify(Expr(Rational(big)), Relation::Less, lhs).verdict, Verdict::True);
}

TEST(Certify, UndecidableAtCapIsAnErrorNotAnAnswer) {
  // sqrt(3 + 2 sqrt 2) = 1 + sqrt 2: a true equality outside the exact path.
  Expr e = sqrt(Expr(3) + Expr(2) * sqrt(Expr(2))) - (Expr(1) + sqrt(Expr(2)));
  EXPECT_THROW(certify(e, Relation::Less, Expr(0), PrecisionPolicy{16, 512}), UndecidableAtCap);
  // Nonzero and below 2^{-300}, relative to operands near 2^{600}.
  Integer n = Integer(1) << 300;
  Expr f = sqrt(Expr(Rational(n * n + 1))) - Expr(Rational(n));
  EXPECT_EQ(certify(f, Relation::Less, Expr(0)).verdict, Verdict::False);
}

TEST(Certify, InvalidPolicyIsArgumentError) {
  EXPECT_THROW(certify(Expr(1), Relation::Less, Expr(2), PrecisionPolicy{128, 64}), ArgumentError);
}

TEST(CertifiedFloor, ExactAndNumeric) {
  EXPECT_EQ(certified_floor(Expr(3) * sqrt(Expr(4))).value, 6);
  EXPECT_EQ(certified_floor(Expr(3) * sqrt(Expr(4))).deciding_bits, 0);
  EXPECT_EQ(certified_floor(Expr(3) * sqrt(Expr(2))).value, 4);
  EXPECT_EQ(certified_floor(-sqrt(Expr(2))).value, -2);
}

// Random sums of square roots against rationals; every verdict must agree
// with an enclosure at four times the deciding precision.
TEST(Certify, VerdictsSurviveFourfoldPrecision) {
  std::mt19937_64 rng(2026);
  std::uniform_int_distribution<long> num(1, 400), den(1, 40), sq(1, 60);
  int decided_numerically = 0;
  for (int trial = 0; trial < 300; ++trial) {
    Expr lhs = sqrt(Expr(q(sq(rng), den(rng)))) + sqrt(Expr(q(sq(rng), den(rng))));
    if (trial % 3 == 0) lhs = lhs - sqrt(Expr(q(sq(rng))));
    Expr rhs = Expr(q(num(rng), den(rng)));
    Relation rel = trial % 2 ? Relation::Less : Relation::LessEqual;
    CertifyResult r = certify(lhs, rel, rhs);
    if (r.deciding_bits == 0) continue;
    ++decided_numerically;
    CertifiedReal v = enclose(lhs - rhs, 4 * r.deciding_bits);
    if (r.verdict == Verdict::True)
      EXPECT_TRUE(v.negative());
    else
      EXPECT_TRUE(v.positive());
  }
  EXPECT_GT(decided_numerically, 100);
}

TEST(RadicalSum, NormalForm) {
  RadicalSum s = RadicalSum::sqrt_of(8) + RadicalSum::sqrt_of(2);
  ASSERT_EQ(s.size(), 1u);
  EXPECT_TRUE((s - RadicalSum::sqrt_of(18)).is_zero());
  EXPECT_TRUE((RadicalSum::sqrt_of(8) - RadicalSum::sqrt_of(2) * RadicalSum::rational(2)).is_zero());
  EXPECT_EQ(*RadicalSum::sqrt_of(q(9, 4)).as_rational(), q(3, 2));
  EXPECT_FALSE(RadicalSum::sqrt_of(3).as_rational());
  EXPECT_THROW(RadicalSum::sqrt_of(-1), ArgumentError);
}

}  // namespace
}  // namespace dioph
