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
#include <numbers>
#include <random>

#include <gtest/gtest.h>

#include "dioph/spectra.hpp"

namespace dioph {
namespace {

Rational q(long p, long r = 1) {
  Rational x(p, r);
  x.canonicalize();
  return x;
}

TEST(FInv, RoundTripOnRandomBeta) {
  std::mt19937_64 rng(17);
  std::uniform_int_distribution<long> num(0, 400), den(1, 97);
  for (int t = 0; t < 100; ++t) {
    int d = 2 + t % 4;
    Rational beta = q(num(rng), den(rng));
    CertifiedReal b = f_inv(d, f_map(d, beta));
    EXPECT_TRUE(b.contains(beta)) << "d=" << d << " beta=" << beta;
    EXPECT_LT(abs(b - CertifiedReal::from_rational(beta, 256)).hi_double(), 1e-60);
  }
}

TEST(FInv, Examples) {
  EXPECT_EQ(f_map(3, q(1)), 4);
  for (int d = 2; d <= 6; ++d) EXPECT_EQ(f_map(d, q(0)), 0);
  EXPECT_EQ(f_map(3, q(3, 2)) / 3, q(9, 4));
  EXPECT_EQ(q(9, 4), 3 - q(3, 4));
  EXPECT_TRUE(f_inv(3, q(4)).contains(q(1)));
  EXPECT_THROW(f_inv(3, q(-1)), ArgumentError);
}

TEST(Roots, CubicFieldAgainstTrigonometricForm) {
  FieldSpec f = builtin_field(3);
  EXPECT_EQ(f.poly, (Polynomial{-1, -3, 0, 1}));
  auto roots = isolate_real_roots(f.poly);
  ASSERT_EQ(roots.size(), 3u);
  // x = 2 cos(theta) with cos(3 theta) = 1/2.
  const double pi = std::numbers::pi;
  const double expect[] = {2 * std::cos(pi / 9), 2 * std::cos(13 * pi / 9), 2 * std::cos(7 * pi / 9)};
  for (int i = 0; i < 3; ++i) {
    RootEnclosure r = refine_root(f.poly, roots[static_cast<std::size_t>(i)], 200);
    EXPECT_NEAR(r.mid(), expect[i], 1e-14);
    EXPECT_LE(r.lo, r.hi);
    EXPECT_LT(Rational(r.hi - r.lo), Rational(Integer(1), Integer(1) << 199));
    EXPECT_LE(eval(f.poly, r.lo) * eval(f.poly, r.hi), 0);
  }
  // Isolating intervals are disjoint and ordered, largest root first.
  for (int i = 0; i < 3; ++i) {
    EXPECT_LE(roots[static_cast<std::size_t>(i)].lo.get_d(), expect[i]);
    EXPECT_GE(roots[static_cast<std::size_t>(i)].hi.get_d(), expect[i]);
  }
  EXPECT_LE(roots[1].hi, roots[0].lo);
  EXPECT_LE(roots[2].hi, roots[1].lo);
}

TEST(Roots, NotTotallyRealIsArgumentError) {
  EXPECT_THROW(companion_forms(FieldSpec{"x^3-2", Polynomial{-2, 0, 0, 1}}), ArgumentError);
  EXPECT_THROW(companion_forms(FieldSpec{"2x^2-1", Polynomial{-1, 0, 2}}), ArgumentError);
  EXPECT_THROW(builtin_field(9), ArgumentError);
}

// The product of the conjugate embeddings is the field norm: an integer, and
// nonzero away from z = 0.
TEST(CompanionForms, ProductIsNonzeroInteger) {
  std::mt19937_64 rng(23);
  std::uniform_int_distribution<long> u(-30, 30);
  for (int d = 2; d <= 5; ++d) {
    auto forms = companion_forms(d);
    ASSERT_EQ(forms.size(), static_cast<std::size_t>(d));
    std::vector<std::vector<CertifiedReal>> coef;
    for (const auto& f : forms) coef.push_back(f.coefficients(256));
    for (int t = 0; t < 50; ++t) {
      std::vector<Integer> c(static_cast<std::size_t>(d));
      for (auto& x : c) x = u(rng);
      IntVector z(c);
      if (z.is_zero()) continue;
      CertifiedReal prod = CertifiedReal::from_integer(1, 256);
      for (const auto& row : coef) prod = prod * evaluate(row, z, 256);
      Integer lo = prod.floor_lo(), hi = prod.floor_hi();
      ASSERT_TRUE(hi - lo <= 1);
      Integer n = prod.contains(Rational(hi)) ? hi : lo;
      EXPECT_TRUE(prod.contains(Rational(n))) << "d=" << d;
      EXPECT_NE(n, 0) << "d=" << d;
    }
    // At e_1 every embedding equals 1.
    CertifiedReal p = CertifiedReal::from_integer(1, 128);
    for (const auto& row : coef) p = p * evaluate(row, IntVector::unit(static_cast<std::size_t>(d), 0), 256);
    EXPECT_TRUE(p.contains(Rational(1)));
  }
}

TEST(OmegaEstimate, NormFormHasNoPointBelowBound) {
  LatticeSpec spec = norm_form_lattice(builtin_field(3));
  EXPECT_TRUE(spec.norm_form);
  OmegaEstimate e = omega_estimate(spec, 30000);
  EXPECT_FALSE(e.partial);
  EXPECT_EQ(e.points_examined, 30000u);
  EXPECT_EQ(e.below_norm_bound, 0u);
  EXPECT_EQ(e.infinite_witnesses, 0u);
  EXPECT_FALSE(e.omega_infinite);
  EXPECT_LE(e.omega_hat.hi_double(), 0.1);
  EXPECT_FALSE(e.caveat.empty());
}

TEST(OmegaEstimate, IdentityLatticeHasInfiniteWitness) {
  LatticeSpec spec = lattice_from_forms(companion_forms({{q(1), q(0), q(0)}, {q(0), q(1), q(0)}, {q(0), q(0), q(1)}}),
                                        "rational-rows");
  OmegaEstimate e = omega_estimate(spec, 1000);
  EXPECT_TRUE(e.omega_infinite);
  EXPECT_GT(e.infinite_witnesses, 0u);
}

TEST(OmegaEstimate, DependentRowsAreRejected) {
  EXPECT_THROW(lattice_from_forms(companion_forms({{q(1), q(2)}, {q(2), q(4)}}), "rational-rows"), DegeneracyError);
}

TEST(OmegaEstimate, RecordsUnderSmallerBudgetArePrefix) {
  // A cubic lattice with one rational row: records come from good rational
  // approximations of that row.
  auto forms = companion_forms(3);
  forms.pop_back();
  forms.push_back(LinearForm::from_rational({q(-355, 1130), q(-113, 339), q(1)}));
  LatticeSpec spec = lattice_from_forms(std::move(forms), "rational-rows");
  OmegaEstimate small = omega_estimate(spec, 3000, {}, {}, 0.0);
  OmegaEstimate large = omega_estimate(spec, 30000, {}, {}, 0.0);
  ASSERT_GE(large.records.size(), small.records.size());
  ASSERT_GE(small.records.size(), 1u);
  for (std::size_t i = 0; i < small.records.size(); ++i) EXPECT_EQ(small.records[i].z, large.records[i].z);
  for (std::size_t i = 1; i < large.records.size(); ++i) {
    EXPECT_TRUE(large.records[i].norm.hi_double() >= large.records[i - 1].norm.lo_double());
    if (!large.records[i].infinite) {
      EXPECT_GT(large.records[i].ratio.lo_double(), large.records[i - 1].ratio.hi_double());
    }
  }
}

TEST(AssembleLattice, TargetWarningsAndNondegeneracy) {
  ConstructionState s = construct(3, q(3, 2), 8);
  FieldSpec field = builtin_field(3);
  auto comps = companion_forms(field);
  comps.pop_back();
  DirectionReport dr = asymptotic_directions(s);
  LatticeSpec spec = assemble_lattice(s, comps, &dr, field.name);
  ASSERT_TRUE(spec.target.has_value());
  EXPECT_EQ(*spec.target, q(9, 4));
  EXPECT_TRUE(spec.warnings.empty());
  EXPECT_EQ(spec.nondegeneracy, Nondegeneracy::Holds);
  EXPECT_EQ(spec.forms.back().rational, surrogate_alpha(s).alpha.coords());
  EXPECT_FALSE(spec.determinant.contains_zero());

  ConstructionState s1 = construct(3, q(1), 8);
  LatticeSpec spec1 = assemble_lattice(s1, comps);
  EXPECT_FALSE(spec1.warnings.empty());
  EXPECT_EQ(*spec1.target, q(4, 3));

  EXPECT_THROW(assemble_lattice(s, companion_forms(field)), ArgumentError);
}

TEST(AssembleLattice, ConstructedVectorsAreProbes) {
  ConstructionState s = construct(3, q(3, 2), 8);
  auto probes = construction_probes(s);
  ASSERT_FALSE(probes.empty());
  for (const auto& p : probes) {
    bool found = false;
    for (const auto& v : s.vectors()) found = found || v == p;
    EXPECT_TRUE(found);
  }
}

}  // namespace
}  // namespace dioph
