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

#include "dioph/diagnostics.hpp"

namespace dioph {
namespace {

Rational q(long p, long r = 1) {
  Rational x(p, r);
  x.canonicalize();
  return x;
}

const ConstructionState& run_beta1() {
  static const ConstructionState s = construct(3, q(1), 12);
  return s;
}

// Random element of SL_3(Z) as a product of elementary row operations.
std::vector<IntVector> random_unimodular(std::mt19937_64& rng) {
  std::vector<std::vector<long>> m{{1, 0, 0}, {0, 1, 0}, {0, 0, 1}};
  std::uniform_int_distribution<int> idx(0, 2);
  std::uniform_int_distribution<long> mult(-3, 3);
  for (int step = 0; step < 12; ++step) {
    int i = idx(rng), j = idx(rng);
    if (i == j) continue;
    long c = mult(rng);
    for (int col = 0; col < 3; ++col) m[i][col] += c * m[j][col];
  }
  std::vector<IntVector> w;
  for (int col = 0; col < 3; ++col) w.push_back(IntVector{m[0][col], m[1][col], m[2][col]});
  return w;
}

TEST(DistanceIdentity, EveryWindowOfConstructedRun) {
  const ConstructionState& s = run_beta1();
  for (long k = 1; k + 3 <= static_cast<long>(s.size()); ++k) {
    IdentityCheck c = distance_alphas_check(s, k);
    EXPECT_EQ(c.verdict, Verdict::ExactEquality) << "k=" << k;
    EXPECT_EQ(c.lhs, c.rhs);
  }
  EXPECT_THROW(distance_alphas_check(s, 0), DegeneracyError);
}

TEST(DistanceIdentity, RandomUnimodularWindows) {
  std::mt19937_64 rng(3);
  int checked = 0;
  while (checked < 100) {
    std::vector<IntVector> w = random_unimodular(rng);
    ASSERT_EQ(abs(full_determinant(w)), 1);
    IdentityCheck c;
    try {
      c = distance_alphas_identity(w);
    } catch (const DegeneracyError&) {
      continue;
    }
    EXPECT_EQ(c.verdict, Verdict::ExactEquality);
    ++checked;
  }
}

TEST(DistanceIdentity, HoldsWithoutUnimodularity) {
  std::mt19937_64 rng(4);
  std::uniform_int_distribution<long> u(-9, 9);
  int checked = 0;
  while (checked < 100) {
    std::vector<IntVector> w;
    for (int i = 0; i < 4; ++i) w.push_back(IntVector{u(rng), u(rng), u(rng), u(rng)});
    try {
      IdentityCheck c = distance_alphas_identity(w);
      EXPECT_EQ(c.verdict, Verdict::ExactEquality);
      ++checked;
    } catch (const DegeneracyError&) {
    }
  }
}

// d = 2: |p/q - p'/q'| = |p q' - p' q| / (q q').
TEST(DistanceIdentity, ReducesToConvergentDifference) {
  std::mt19937_64 rng(8);
  std::uniform_int_distribution<long> u(-50, 50);
  for (int t = 0; t < 100; ++t) {
    long q0 = u(rng), p0 = u(rng), q1 = u(rng), p1 = u(rng);
    if (q0 == 0 || q1 == 0) continue;
    std::vector<IntVector> w{IntVector{q0, p0}, IntVector{q1, p1}};
    IdentityCheck c = distance_alphas_identity(w);
    Rational diff = q(p0, q0) - q(p1, q1);
    EXPECT_EQ(c.lhs, diff * diff);
    EXPECT_EQ(c.verdict, Verdict::ExactEquality);
  }
}

TEST(NestedBalls, ShrinkAndContainOnRuns) {
  for (auto [d, beta, steps] : {std::tuple{3, q(1), 12L}, std::tuple{3, q(3, 2), 10L}, std::tuple{4, q(1), 10L}}) {
    ConstructionState s = d == 3 && beta == 1 ? run_beta1() : construct(d, beta, steps);
    long K = std::max(1L, hypothesis_threshold(s).K);
    int checked = 0;
    for (long k = K; k + 1 <= last_alpha_index(s); ++k) {
      NestedBallsReport r = nested_balls_check(s, k);
      EXPECT_EQ(r.status, CheckStatus::Holds) << "d=" << d << " k=" << k;
      EXPECT_TRUE(r.radius_shrinks);
      EXPECT_TRUE(r.contained);
      ++checked;
    }
    EXPECT_GE(checked, 5);
  }
}

TEST(NestedBalls, RadiusRatioIsExact) {
  const ConstructionState& s = run_beta1();
  NestedBallsReport r = nested_balls_check(s, 3);
  EXPECT_EQ(r.R_sq_k, alpha_ball(s, 3).R_sq);
  EXPECT_EQ(r.R_sq_next, alpha_ball(s, 4).R_sq);
  EXPECT_LT(9 * r.R_sq_next, r.R_sq_k);
  EXPECT_EQ(r.dist_sq, dist_sq(alpha_ball(s, 3).alpha, alpha_ball(s, 4).alpha));
}

TEST(Surrogate, LastAlphaByDefault) {
  const ConstructionState& s = run_beta1();
  SurrogateAlpha a = surrogate_alpha(s);
  EXPECT_EQ(a.index, last_alpha_index(s));
  EXPECT_EQ(a.alpha, alpha_ball(s, a.index).alpha);
  EXPECT_EQ(surrogate_alpha(s, 5).alpha, alpha_ball(s, 5).alpha);
}

TEST(MergedBounds, HoldOnEnumerableWindows) {
  const ConstructionState& s = run_beta1();
  SurrogateAlpha a = surrogate_alpha(s);
  int enumerated = 0;
  for (long k = 0; k <= 3; ++k) {
    MergedBoundsReport r = merged_bounds_check(s, k, a.alpha);
    EXPECT_NE(r.status, CheckStatus::Violated) << "k=" << k << " " << r.note;
    EXPECT_TRUE(r.pair_holds) << "k=" << k;
    if (r.enumerated) {
      ++enumerated;
      EXPECT_TRUE(r.ball_holds) << "k=" << k;
      EXPECT_TRUE(r.annulus_holds) << "k=" << k;
    }
  }
  EXPECT_GE(enumerated, 2);
}

TEST(MergedBounds, BudgetLimitsToExactPart) {
  const ConstructionState& s = run_beta1();
  EnumerationConfig tiny;
  tiny.budget = 4;
  MergedBoundsReport r = merged_bounds_check(s, 2, surrogate_alpha(s).alpha, tiny);
  EXPECT_FALSE(r.enumerated);
  EXPECT_TRUE(r.pair_holds);
}

TEST(FMap, Values) {
  EXPECT_EQ(f_map(3, q(1)), 4);
  EXPECT_EQ(f_map(3, q(3, 2)), q(27, 4));
  EXPECT_EQ(f_map(2, q(1)), 1);
  EXPECT_EQ(f_map(4, q(1, 2)), q(3));
  EXPECT_THROW(f_map(1, q(1)), ArgumentError);
  EXPECT_THROW(f_map(3, q(-1)), ArgumentError);
}

TEST(Decay, SlopeNearTarget) {
  DecaySeries ds = decay_series(run_beta1(), surrogate_alpha(run_beta1()));
  EXPECT_EQ(ds.target, -4);
  EXPECT_TRUE(ds.intersects_band);
  EXPECT_GE(ds.entries.size(), 10u);
  EXPECT_NEAR(ds.slope_mid, -4.0, 0.4);
  for (std::size_t i = 1; i < ds.entries.size(); ++i)
    EXPECT_TRUE(ds.entries[i - 1].log_norm.certainly_less(ds.entries[i].log_norm));
}

TEST(Decay, TooShortRunIsInsufficientData) {
  ConstructionState s = construct(3, q(1), 3);
  EXPECT_THROW(decay_series(s, surrogate_alpha(s)), InsufficientData);
}

TEST(Separation, PositiveConstant) {
  const ConstructionState& s = run_beta1();
  SeparationReport r = separation_check(s, surrogate_alpha(s), Integer(100000));
  EXPECT_TRUE(r.positive);
  EXPECT_FALSE(r.empty);
  EXPECT_GT(r.nonmultiples, 0u);
  EXPECT_TRUE(r.c_sep.positive());
  EXPECT_TRUE(r.factor_c.positive());
  ASSERT_TRUE(r.minimizer.has_value());
  EXPECT_EQ(r.exponent, q(4));
}

TEST(Directions, TwoDisjointLimitsAtCosineOneOverRootTwo) {
  const ConstructionState& s = run_beta1();
  DirectionReport r = asymptotic_directions(s, hypothesis_threshold(s).K);
  EXPECT_EQ(r.pair_count, 2);
  EXPECT_TRUE(r.disjoint);
  EXPECT_TRUE(r.tail_ratio_ok);
  EXPECT_LE(r.cross_cosine_gap, 0.05);
  ASSERT_EQ(r.even_limit.size(), 2u);
  // Unit vectors within enclosure width.
  CertifiedReal n = r.even_limit[0] * r.even_limit[0] + r.even_limit[1] * r.even_limit[1];
  EXPECT_LT(n.lo_double(), 1.0 + 1e-9);
  EXPECT_GT(n.hi_double(), 1.0 - 1e-9);
}

TEST(Directions, ShortRunIsInsufficientData) {
  ConstructionState s = construct(3, q(1), 2);
  EXPECT_THROW(asymptotic_directions(s), InsufficientData);
}

}  // namespace
}  // namespace dioph
