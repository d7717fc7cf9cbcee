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
#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "dioph/certified_real.hpp"
#include "dioph/certify.hpp"
#include "dioph/linalg.hpp"
#include "dioph/types.hpp"

namespace dioph {

/// One entry of the chain inequality on Gram determinants of a step:
/// gram_n(s) > 9 |z_{s+1}|^2 gram_{n-1}(s), with s = k + d + 1 - n.
struct ChainCheck {
  int n = 0;
  Integer gram_n;
  Integer gram_n_minus_1;
  Integer next_norm_sq;
  bool holds = false;
  double ratio = 0.0;  // gram_n / (|z_{s+1}|^2 gram_{n-1}); bounded above and below
};

/// Per-step flags of a construction step k, i.e. of the window
/// z_k, ..., z_{k+d}.
struct HypothesisReport {
  long k = 0;
  bool unimodular = false;
  Integer full_det;
  bool obtuse = false;
  Integer inner;        // <z_{k+d-1}, z_{k+d}> on projections
  bool growth = false;
  Rational B_sq;
  Rational D2_sq;
  CertifiedReal B_witness;   // B^2 / |z_{k+d-1}|^{2 beta}
  CertifiedReal D2_witness;  // D^2 / |z_{k+d-1}|^{2 beta}
  bool chain = true;         // vacuous for d = 3
  std::vector<ChainCheck> chain_checks;
  bool sign = false;
  Rational sign_product;

  bool all() const { return unimodular && obtuse && growth && chain && sign; }
  bool asymptotic() const { return growth && chain && sign; }
};

struct StepDiagnostics {
  long k = 0;
  std::vector<Integer> mu;      // mu_{k+1}, ..., mu_{k+d-1}
  std::vector<Rational> nu;     // exact frame coordinates
  std::vector<CertifiedReal> nu_enclosures;
  std::vector<CertifiedReal> target_enclosures;
  bool nu_in_range = false;     // 0 < nu_i - t_i <= 1 certified for every i
  long deciding_bits = 0;
  CertifiedReal growth_ratio;   // |z_{k+d}| / |z_{k+d-1}|^{1+beta}
  HypothesisReport hypotheses;
  WindowQuantities quantities;  // of z_{k+1}, ..., z_{k+d}
};

class ConstructionState {
 public:
  static ConstructionState seed(int d, Rational beta, PrecisionPolicy policy = {}) {
    if (d < 3) throw ArgumentError("construction needs d >= 3");
    if (beta <= 0) throw ArgumentError("construction needs beta > 0");
    policy.validate();
    ConstructionState s;
    s.d_ = d;
    s.beta_ = std::move(beta);
    s.beta_.canonicalize();
    s.policy_ = policy;
    const std::size_t n = static_cast<std::size_t>(d);
    // Column i+1 of the cyclic matrix: e_d for i = 0, then e_1, ..., e_{d-1}.
    s.vectors_.push_back(IntVector::unit(n, n - 1));
    for (std::size_t i = 1; i < n; ++i) s.vectors_.push_back(IntVector::unit(n, i - 1));
    if (!(solve_alpha(std::span<const IntVector>(s.vectors_.data() + 1, n - 1)) ==
          RationalPoint(s.vectors_[0])))
      throw DegeneracyError("seed check failed: alpha_1 differs from z_0");
    return s;
  }

  /// Rebuild from serialized parts; no re-derivation.
  static ConstructionState from_parts(int d, Rational beta, PrecisionPolicy policy,
                                      std::vector<IntVector> vectors,
                                      std::vector<StepDiagnostics> diagnostics) {
    ConstructionState s;
    s.d_ = d;
    s.beta_ = std::move(beta);
    s.policy_ = policy;
    s.vectors_ = std::move(vectors);
    s.diagnostics_ = std::move(diagnostics);
    return s;
  }

  int d() const { return d_; }
  const Rational& beta() const { return beta_; }
  const PrecisionPolicy& policy() const { return policy_; }
  const std::vector<IntVector>& vectors() const { return vectors_; }
  const std::vector<StepDiagnostics>& diagnostics() const { return diagnostics_; }
  std::size_t size() const { return vectors_.size(); }
  const IntVector& at(std::size_t i) const { return vectors_.at(i); }
  long steps() const { return static_cast<long>(vectors_.size()) - d_; }

  std::span<const IntVector> window(std::size_t start, std::size_t len) const {
    if (start + len > vectors_.size()) throw ArgumentError("window beyond constructed vectors");
    return std::span<const IntVector>(vectors_.data() + start, len);
  }
  Integer proj_norm_sq(std::size_t i) const { return norm_sq(at(i).projection()); }

  /// Fault injection for tests; invalidates nothing else.
  void replace_vector(std::size_t i, IntVector v) { vectors_.at(i) = std::move(v); }

  void next_vector();

 private:
  int d_ = 0;
  Rational beta_;
  PrecisionPolicy policy_;
  std::vector<IntVector> vectors_;
  std::vector<StepDiagnostics> diagnostics_;
};

/// Expressions of the targets t_{k+1}, ..., t_{k+d-1} for step k together with
/// the frame they refer to.
struct TargetSet {
  GramSchmidtFrame frame;
  std::vector<Expr> exprs;
  std::vector<CertifiedReal> enclosures;
};

inline TargetSet target_expressions(const ConstructionState& s, long k) {
  const std::size_t d = static_cast<std::size_t>(s.d());
  const std::size_t base = static_cast<std::size_t>(k) + 1;
  std::vector<IntVector> proj = projections(s.window(base, d - 1));
  TargetSet t;
  t.frame = gram_schmidt_reverse(proj);
  Rational half_exp = (1 + s.beta()) / 2;
  half_exp.canonicalize();
  const Integer top = norm_sq(proj[d - 2]);
  for (std::size_t j = 0; j + 1 < d; ++j) {
    // window index j is z_{k+1+j}
    if (j + 3 < d) {
      Integer nz = norm_sq(proj[j + 2]);
      Rational r = Rational(9 * nz) / t.frame.norm_sq[j];
      r.canonicalize();
      t.exprs.push_back(sqrt(Expr(r)));
    } else {
      t.exprs.push_back(Expr(3) * pow(Expr(top), half_exp) / sqrt(Expr(t.frame.norm_sq[j])));
    }
  }
  return t;
}

inline std::vector<CertifiedReal> target_coordinates(const ConstructionState& s, long k) {
  TargetSet t = target_expressions(s, k);
  std::vector<CertifiedReal> out;
  for (const auto& e : t.exprs) out.push_back(enclose(e, s.policy().start));
  return out;
}

inline HypothesisReport check_step_hypotheses(const ConstructionState& s, long k) {
  const std::size_t d = static_cast<std::size_t>(s.d());
  const std::size_t kk = static_cast<std::size_t>(k);
  if (kk + d >= s.size()) throw ArgumentError("step hypotheses need z_{k+d}");
  HypothesisReport r;
  r.k = k;
  r.full_det = full_determinant(s.window(kk + 1, d));
  r.unimodular = (r.full_det == 1 || r.full_det == -1);

  IntVector last = s.at(kk + d).projection();
  IntVector prev = s.at(kk + d - 1).projection();
  r.inner = dot(prev, last);
  r.obtuse = r.inner < 0;

  Integer n_prev = norm_sq(prev);
  Integer n_last = norm_sq(last);
  r.B_sq = Rational(n_last, n_prev);
  r.B_sq.canonicalize();
  std::vector<IntVector> pair{prev, last};
  r.D2_sq = Rational(gram_determinant(pair), n_prev * n_prev);
  r.D2_sq.canonicalize();
  r.growth = r.B_sq > 9 && r.D2_sq > 9;
  Expr scale = pow(Expr(n_prev), s.beta());
  r.B_witness = enclose(Expr(r.B_sq) / scale, 64);
  r.D2_witness = enclose(Expr(r.D2_sq) / scale, 64);

  r.chain = true;
  for (std::size_t n = 3; n + 1 <= d; ++n) {
    const std::size_t start = kk + d + 1 - n;
    std::vector<IntVector> proj = projections(s.window(start, n));
    ChainCheck c;
    c.n = static_cast<int>(n);
    c.gram_n = gram_determinant(proj);
    c.gram_n_minus_1 = gram_determinant(std::span<const IntVector>(proj.data(), n - 1));
    c.next_norm_sq = norm_sq(proj[1]);
    c.holds = c.gram_n > 9 * c.next_norm_sq * c.gram_n_minus_1;
    Rational ratio(c.gram_n, c.next_norm_sq * c.gram_n_minus_1);
    ratio.canonicalize();
    c.ratio = ratio.get_d();
    r.chain = r.chain && c.holds;
    r.chain_checks.push_back(std::move(c));
  }

  AlphaSolution a = solve_alpha_scaled(s.window(kk + 2, d - 1));
  r.sign_product = dot(a.alpha, s.at(kk + 1)) * dot(a.alpha, s.at(kk));
  r.sign = r.sign_product > 0;
  return r;
}

inline void ConstructionState::next_vector() {
  const std::size_t d = static_cast<std::size_t>(d_);
  if (vectors_.size() < d) throw ArgumentError("state has fewer than d vectors");
  const long k = static_cast<long>(vectors_.size() - d);
  const std::size_t kk = static_cast<std::size_t>(k);
  TargetSet t = target_expressions(*this, k);

  StepDiagnostics st;
  st.k = k;
  IntVector acc = -vectors_[kk].projection();
  for (std::size_t j = 0; j + 1 < d; ++j) {
    const IntVector& zj = vectors_[kk + 1 + j];
    Rational rj = dot(t.frame.b[j], acc) / t.frame.norm_sq[j];
    CertifiedFloor f{0, 0};
    Integer mu;
    if (j + 2 < d) {
      // t < mu + r <= t + 1
      f = certified_floor(t.exprs[j] - Expr(rj), policy_);
      mu = f.value + 1;
    } else {
      // t < -(mu + r) <= t + 1
      f = certified_floor(t.exprs[j] + Expr(rj), policy_);
      mu = -f.value - 1;
    }
    st.deciding_bits = std::max(st.deciding_bits, f.deciding_bits);
    acc += mu * zj.projection();
    st.mu.push_back(std::move(mu));
  }

  IntVector z = -vectors_[kk];
  for (std::size_t j = 0; j + 1 < d; ++j) z += st.mu[j] * vectors_[kk + 1 + j];
  IntVector zp = z.projection();
  if (!(zp == acc)) throw DegeneracyError("affine representation mismatch");

  st.nu_in_range = true;
  for (std::size_t j = 0; j + 1 < d; ++j) {
    Rational c = dot(t.frame.b[j], zp) / t.frame.norm_sq[j];
    Rational nu = (j + 2 < d) ? c : Rational(-c);
    nu.canonicalize();
    CertifyResult lo = certify(t.exprs[j], Relation::Less, Expr(nu), policy_);
    CertifyResult hi = certify(Expr(nu), Relation::LessEqual, t.exprs[j] + Expr(1), policy_);
    st.nu_in_range = st.nu_in_range && lo.holds(Relation::Less) && hi.holds(Relation::LessEqual);
    long bits = std::max({policy_.start, lo.deciding_bits, hi.deciding_bits});
    st.nu_enclosures.push_back(CertifiedReal::from_rational(nu, 64));
    st.target_enclosures.push_back(enclose(t.exprs[j], bits));
    st.nu.push_back(std::move(nu));
  }

  Rational half_exp = (1 + beta_) / 2;
  half_exp.canonicalize();
  st.growth_ratio = enclose(sqrt(Expr(norm_sq(zp))) /
                                pow(Expr(norm_sq(vectors_[kk + d - 1].projection())), half_exp),
                            64);
  vectors_.push_back(std::move(z));
  st.hypotheses = check_step_hypotheses(*this, k);
  st.quantities = window_quantities(window(kk + 1, d));
  diagnostics_.push_back(std::move(st));
}

inline ConstructionState construct(int d, const Rational& beta, long steps, PrecisionPolicy policy = {}) {
  if (steps < 0) throw ArgumentError("negative step count");
  ConstructionState s = ConstructionState::seed(d, beta, policy);
  for (long i = 0; i < steps; ++i) s.next_vector();
  return s;
}

/// Smallest step index K such that growth, chain and sign hold at every step
/// k >= K.
struct Threshold {
  long K = 0;
  bool found = false;  // false when the last step still fails
  bool basic_flags_everywhere = false;  // unimodular and obtuse at every step
};

inline Threshold hypothesis_threshold(const ConstructionState& s) {
  Threshold t;
  const auto& diag = s.diagnostics();
  t.basic_flags_everywhere = true;
  for (const auto& st : diag) {
    t.basic_flags_everywhere =
        t.basic_flags_everywhere && st.hypotheses.unimodular && st.hypotheses.obtuse;
  }
  long K = static_cast<long>(diag.size());
  for (std::size_t i = diag.size(); i-- > 0;) {
    if (!diag[i].hypotheses.asymptotic()) break;
    K = diag[i].k;
  }
  t.K = K;
  t.found = K < static_cast<long>(diag.size()) || diag.empty();
  return t;
}

/// The ball S_k: center alpha_k (orthogonal to z_k, ..., z_{k+d-2}) and R_k^2.
struct AlphaBall {
  RationalPoint alpha;
  Rational R_sq;
  Integer gram;  // gram of z_k, ..., z_{k+d-2} projections
};

inline AlphaBall alpha_ball(const ConstructionState& s, long k) {
  if (k < 0) throw ArgumentError("negative ball index");
  const std::size_t d = static_cast<std::size_t>(s.d());
  const std::size_t kk = static_cast<std::size_t>(k);
  auto w = s.window(kk, d - 1);
  AlphaSolution a = solve_alpha_scaled(w);
  AlphaBall b;
  b.alpha = std::move(a.alpha);
  b.gram = a.det * a.det;
  b.R_sq = Rational(1, 4 * norm_sq(w[1].projection()) * b.gram);
  b.R_sq.canonicalize();
  return b;
}

/// Largest k for which alpha_k is available.
inline long last_alpha_index(const ConstructionState& s) {
  return static_cast<long>(s.size()) - s.d() + 1;
}

}  // namespace dioph
