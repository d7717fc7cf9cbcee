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
#include <cstdint>
#include <limits>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "dioph/certified_real.hpp"
#include "dioph/certify.hpp"
#include "dioph/construction.hpp"
#include "dioph/linalg.hpp"
#include "dioph/oracle.hpp"
#include "dioph/types.hpp"

namespace dioph {

// ---------------------------------------------------------------------------
// Distance between consecutive alphas.

struct IdentityCheck {
  long k = 0;
  Verdict verdict = Verdict::False;
  Rational lhs;  // |alpha_k - alpha_{k+1}|^2
  Rational rhs;  // gram(z_{k+1..k+d-2}) det(z_{k..k+d-1})^2 / (gram(z_{k..k+d-2}) gram(z_{k+1..k+d-1}))
};

/// The squared identity on a window of d independent vectors of Z^d; any
/// d >= 2 is accepted.
inline IdentityCheck distance_alphas_identity(std::span<const IntVector> w) {
  const std::size_t d = w.size();
  if (d < 2) throw ArgumentError("identity needs a window of at least two vectors");
  IdentityCheck c;
  RationalPoint a0 = solve_alpha(w.subspan(0, d - 1));
  RationalPoint a1 = solve_alpha(w.subspan(1, d - 1));
  c.lhs = dist_sq(a0, a1);
  std::vector<IntVector> p = projections(w);
  std::span<const IntVector> ps(p);
  Integer inner = gram_determinant(ps.subspan(1, d - 2));
  Integer det = full_determinant(w);
  Integer g0 = gram_determinant(ps.subspan(0, d - 1));
  Integer g1 = gram_determinant(ps.subspan(1, d - 1));
  c.rhs = Rational(inner * det * det, g0 * g1);
  c.rhs.canonicalize();
  c.verdict = (c.lhs == c.rhs) ? Verdict::ExactEquality : Verdict::False;
  return c;
}

inline IdentityCheck distance_alphas_check(const ConstructionState& s, long k) {
  if (k < 1) throw DegeneracyError("alpha_0 is undefined");
  IdentityCheck c = distance_alphas_identity(s.window(static_cast<std::size_t>(k), static_cast<std::size_t>(s.d())));
  c.k = k;
  return c;
}

// ---------------------------------------------------------------------------
// Nested balls.

enum class CheckStatus { Holds, HypothesesUnmet, Violated };

inline const char* to_string(CheckStatus s) {
  switch (s) {
    case CheckStatus::Holds: return "holds";
    case CheckStatus::HypothesesUnmet: return "hypotheses-unmet";
    case CheckStatus::Violated: return "violated";
  }
  return "?";
}

struct NestedBallsReport {
  long k = 0;
  CheckStatus status = CheckStatus::HypothesesUnmet;
  bool hyp_basis = false;
  bool hyp_norms = false;  // |z_{k+2}| >= |z_k|
  bool hyp_chain = false;  // gram(z_{k+1..k+d-1}) > 9 |z_{k+1}|^2 gram(z_{k+1..k+d-2})
  bool radius_shrinks = false;  // R_{k+1}^2 < R_k^2 / 9
  bool contained = false;       // |alpha_k - alpha_{k+1}| + R_{k+1} < R_k
  long deciding_bits = 0;
  Rational R_sq_k, R_sq_next, dist_sq;
};

/// Ball nesting on the window z_k, ..., z_{k+d-1}.
inline NestedBallsReport nested_balls_check(const ConstructionState& s, long k) {
  if (k < 1) throw DegeneracyError("alpha_0 is undefined");
  const std::size_t d = static_cast<std::size_t>(s.d());
  const std::size_t kk = static_cast<std::size_t>(k);
  auto w = s.window(kk, d);
  NestedBallsReport r;
  r.k = k;
  Integer det = full_determinant(w);
  r.hyp_basis = det == 1 || det == -1;
  r.hyp_norms = s.proj_norm_sq(kk + 2) >= s.proj_norm_sq(kk);
  std::vector<IntVector> p = projections(w);
  std::span<const IntVector> ps(p);
  Integer top = gram_determinant(ps.subspan(1, d - 1));
  Integer below = gram_determinant(ps.subspan(1, d - 2));
  r.hyp_chain = top > 9 * norm_sq(p[1]) * below;

  AlphaBall b0 = alpha_ball(s, k);
  AlphaBall b1 = alpha_ball(s, k + 1);
  r.R_sq_k = b0.R_sq;
  r.R_sq_next = b1.R_sq;
  r.dist_sq = dist_sq(b0.alpha, b1.alpha);
  r.radius_shrinks = r.R_sq_next < r.R_sq_k / 9;
  CertifyResult c = certify(sqrt(Expr(r.dist_sq)) + sqrt(Expr(r.R_sq_next)), Relation::Less, sqrt(Expr(r.R_sq_k)),
                            s.policy());
  r.contained = c.holds(Relation::Less);
  r.deciding_bits = c.deciding_bits;
  const bool hyps = r.hyp_basis && r.hyp_norms && r.hyp_chain;
  const bool concl = r.radius_shrinks && r.contained;
  r.status = !hyps ? CheckStatus::HypothesesUnmet : (concl ? CheckStatus::Holds : CheckStatus::Violated);
  return r;
}

// ---------------------------------------------------------------------------
// Surrogate alpha.

struct SurrogateAlpha {
  long index = 0;
  RationalPoint alpha;
  Rational R_sq;
};

/// alpha_N with N = `index`, or the last available index.
inline SurrogateAlpha surrogate_alpha(const ConstructionState& s, std::optional<long> index = std::nullopt) {
  long N = index.value_or(last_alpha_index(s));
  if (N < 1 || N > last_alpha_index(s)) throw ArgumentError("surrogate index outside the constructed range");
  AlphaBall b = alpha_ball(s, N);
  return {N, std::move(b.alpha), std::move(b.R_sq)};
}

namespace detail {

/// Canonical projection and last coordinate of v as machine integers, or
/// nullopt when they do not fit.
struct SmallVector {
  std::vector<std::int64_t> proj;
  Integer last;
};

inline std::optional<SmallVector> small_canonical(const IntVector& v) {
  IntVector c = canonical_sign(v);
  SmallVector out;
  for (std::size_t i = 0; i + 1 < c.dim(); ++i) {
    if (!c[i].fits_slong_p()) return std::nullopt;
    out.proj.push_back(c[i].get_si());
  }
  out.last = c.last();
  return out;
}

/// t >= 1 with p = t * c (c canonical, nonzero), or 0.
inline std::int64_t multiple_of(const std::vector<std::int64_t>& p, const std::vector<std::int64_t>& c) {
  std::size_t i = 0;
  while (i < c.size() && c[i] == 0) ++i;
  if (i == c.size() || p[i] % c[i] != 0) return 0;
  std::int64_t t = p[i] / c[i];
  if (t < 1) return 0;
  for (std::size_t j = 0; j < c.size(); ++j)
    if (p[j] != t * c[j]) return 0;
  return t;
}

/// Whether the full vector (p, last) is an excluded multiple.
struct Exclusions {
  std::vector<SmallVector> multiples_of;  // every integer multiple excluded
  std::vector<SmallVector> exact;         // only +-v itself excluded

  bool excluded(const std::vector<std::int64_t>& p, const Integer& last) const {
    for (const auto& m : multiples_of) {
      std::int64_t t = multiple_of(p, m.proj);
      if (t > 0 && last == Integer(static_cast<long>(t)) * m.last) return true;
    }
    for (const auto& e : exact)
      if (p == e.proj && last == e.last) return true;
    return false;
  }
  bool touches(const std::vector<std::int64_t>& p) const {
    for (const auto& m : multiples_of)
      if (multiple_of(p, m.proj) > 0) return true;
    for (const auto& e : exact)
      if (p == e.proj) return true;
    return false;
  }
};

/// Smallest |L| numerator over the two nearest last coordinates not excluded.
inline std::optional<std::pair<Integer, Integer>> admissible_nearest(const PointView& pv, const Exclusions& ex) {
  auto near = pv.nearest();
  for (const auto& [last, num] : near)
    if (!ex.excluded(pv.proj(), last)) return std::make_pair(last, num);
  return std::nullopt;
}

inline double log_of_integer(const Integer& z) {
  long e = 0;
  double m = mpz_get_d_2exp(&e, z.get_mpz_t());
  return std::log(m) + static_cast<double>(e) * std::numbers::ln2;
}

}  // namespace detail

// ---------------------------------------------------------------------------
// Merged local bounds.

struct MergedBoundsReport {
  long k = 0;
  CheckStatus status = CheckStatus::HypothesesUnmet;
  bool pre_basis = false;
  bool pre_norms = false;
  bool pre_obtuse = false;
  bool pre_chain = true;
  bool pre_in_ball = false;        // alpha_hat in S_{k+1}
  bool pre_in_interior = false;    // alpha_hat in int S_{k+2}
  bool pre_hemisphere = false;
  // pair bound: 1 <= 4 L(z_{k+1})^2 gram(z_{k+2..k+d}) <= 9
  Rational pair_scaled;
  bool pair_holds = false;
  // ball bound on the ball |z|^2 <= |z_{k+2}|^2 and annulus bound on the annulus.
  bool enumerated = false;
  bool ball_holds = false;
  bool annulus_holds = false;
  std::uint64_t points_checked = 0;
  std::uint64_t annulus_points = 0;
  std::optional<IntVector> ball_witness;
  std::optional<IntVector> annulus_witness;
  Rational annulus_bound_sq;
  double annulus_min_ratio = std::numeric_limits<double>::infinity();  // L^2 |z|^{2(d-1)} / bound^2
  std::string note;
};

/// Checks the merged local bounds on the window z_{k+1}, ..., z_{k+d} for a
/// rational alpha_hat. Enumeration runs only when the half ball of radius
/// |z_{k+2}| fits the budget; otherwise ball bound and annulus bound are left unchecked.
inline MergedBoundsReport merged_bounds_check(const ConstructionState& s, long k, const RationalPoint& alpha_hat,
                                              const EnumerationConfig& cfg = {}) {
  const std::size_t d = static_cast<std::size_t>(s.d());
  const std::size_t kk = static_cast<std::size_t>(k);
  if (k < 0 || kk + d >= s.size() + 0 || kk + 3 >= s.size())
    throw ArgumentError("merged bounds need z_{k+1}, ..., z_{k+d} and z_{k+3}");
  MergedBoundsReport r;
  r.k = k;
  auto w = s.window(kk + 1, d);
  Integer det = full_determinant(w);
  r.pre_basis = det == 1 || det == -1;
  Integer n1 = s.proj_norm_sq(kk + 1), n2 = s.proj_norm_sq(kk + 2), n3 = s.proj_norm_sq(kk + 3);
  r.pre_norms = n1 <= n2 && n2 <= n3;
  r.pre_obtuse = dot(s.at(kk + 1).projection(), s.at(kk + 2).projection()) <= 0;
  std::vector<IntVector> p = projections(w);
  std::span<const IntVector> ps(p);
  for (std::size_t n = 3; n + 1 <= d; ++n) {
    Integer gn = gram_determinant(ps.subspan(0, n));
    Integer gm = gram_determinant(ps.subspan(0, n - 1));
    r.pre_chain = r.pre_chain && gn > n2 * gm;
  }
  AlphaBall b1 = alpha_ball(s, k + 1);
  AlphaBall b2 = alpha_ball(s, k + 2);
  r.pre_in_ball = dist_sq(alpha_hat, b1.alpha) <= b1.R_sq;
  r.pre_in_interior = dist_sq(alpha_hat, b2.alpha) < b2.R_sq;
  r.pre_hemisphere = form_value(alpha_hat, s.at(kk + 2)) * form_value(b2.alpha, s.at(kk + 1)) >= 0;
  const bool pre = r.pre_basis && r.pre_norms && r.pre_obtuse && r.pre_chain && r.pre_in_ball &&
                   r.pre_in_interior && r.pre_hemisphere;

  const Rational L1 = abs(form_value(alpha_hat, s.at(kk + 1)));
  const Rational L2 = abs(form_value(alpha_hat, s.at(kk + 2)));
  const Integer G = gram_determinant(ps.subspan(1, d - 1));
  r.pair_scaled = 4 * L1 * L1 * Rational(G);
  r.pair_scaled.canonicalize();
  r.pair_holds = r.pair_scaled >= 1 && r.pair_scaled <= 9;

  // Annulus bound, squared.
  const unsigned long e = static_cast<unsigned long>(d - 1);
  Integer g_first = gram_determinant(ps.subspan(0, d - 1));
  Rational b1sq = Rational(pow_int(n1, e), 4 * g_first);
  std::vector<IntVector> pair{p[0], p[1]};
  Rational D12 = Rational(gram_determinant(pair), n1 * n1);
  D12.canonicalize();
  Rational b2sq = pow_int(D12, e) * Rational(pow_int(n1, e), 4 * G);
  b1sq.canonicalize();
  b2sq.canonicalize();
  r.annulus_bound_sq = std::min(b1sq, b2sq);

  bool ball_second = L1 > L2;
  try {
    check_budget(static_cast<int>(d) - 1, n2, cfg);
    r.enumerated = true;
  } catch (const BudgetExceeded& ex) {
    r.note = ex.what();
  }
  if (r.enumerated) {
    detail::Exclusions ex_ball;  // ball bound: z != 0, +-z_{k+2}
    detail::Exclusions ex_annulus;
    auto c1 = detail::small_canonical(s.at(kk + 1));
    auto c2 = detail::small_canonical(s.at(kk + 2));
    if (!c1 || !c2) throw BudgetExceeded("window vectors exceed the enumeration range");
    ex_ball.exact.push_back(*c2);
    ex_annulus.exact.push_back(*c2);
    ex_annulus.multiples_of.push_back(*c1);
    const std::int64_t lo_norm = n1.get_si();
    const double L1d = L1.get_d();
    const double bound_log = std::log(r.annulus_bound_sq.get_d() > 0 ? r.annulus_bound_sq.get_d() : 1e-300);
    const bool bound_tiny = r.annulus_bound_sq.get_d() < 1e-280;
    struct Slab {
      std::uint64_t points = 0, annulus = 0;
      bool ball_ok = true, annulus_ok = true;
      std::optional<IntVector> ball_w, annulus_w;
      double min_ratio_log = std::numeric_limits<double>::infinity();
    };
    auto slabs = visit_points<Slab>(alpha_hat, n2, cfg, [&](const PointView& pv, Slab& out) {
      ++out.points;
      const double approx = pv.approx_value();
      // ball bound
      bool need_exact_i = approx < L1d * (1 + 1e-9) || ex_ball.touches(pv.proj());
      if (need_exact_i) {
        auto best = detail::admissible_nearest(pv, ex_ball);
        if (best) {
          Rational v(best->second, pv.denominator());
          v.canonicalize();
          if (v < L1 && out.ball_ok) {
            out.ball_ok = false;
            out.ball_w = pv.full(best->first);
          }
        }
      }
      // annulus bound
      if (pv.norm() < lo_norm) return;
      ++out.annulus;
      const bool special = ex_annulus.touches(pv.proj());
      if (approx == 0.0 && !special) {
        // Exact zero of the surrogate form on a non-excluded point.
        auto best = detail::admissible_nearest(pv, ex_annulus);
        if (best && best->second == 0) {
          out.annulus_ok = false;
          if (!out.annulus_w) out.annulus_w = pv.full(best->first);
          out.min_ratio_log = -std::numeric_limits<double>::infinity();
          return;
        }
      }
      double ratio_log = 2 * std::log(approx) + static_cast<double>(e) * std::log(static_cast<double>(pv.norm())) -
                         bound_log;
      if (special || bound_tiny || ratio_log < 1e-6) {
        auto best = detail::admissible_nearest(pv, ex_annulus);
        if (!best) return;
        Rational v(best->second, pv.denominator());
        v.canonicalize();
        Rational lhs = v * v * Rational(pow_int(Integer(static_cast<long>(pv.norm())), e));
        if (lhs < r.annulus_bound_sq) {
          if (out.annulus_ok) out.annulus_w = pv.full(best->first);
          out.annulus_ok = false;
        }
        if (v > 0) {
          ratio_log = std::log(Rational(lhs / r.annulus_bound_sq).get_d());
        } else {
          ratio_log = -std::numeric_limits<double>::infinity();
        }
      }
      out.min_ratio_log = std::min(out.min_ratio_log, ratio_log);
    });
    r.ball_holds = ball_second;
    r.annulus_holds = true;
    double min_log = std::numeric_limits<double>::infinity();
    for (auto& sl : slabs) {
      r.points_checked += sl.points;
      r.annulus_points += sl.annulus;
      if (!sl.ball_ok && r.ball_holds) r.ball_witness = sl.ball_w;
      if (!sl.annulus_ok && r.annulus_holds) r.annulus_witness = sl.annulus_w;
      r.ball_holds = r.ball_holds && sl.ball_ok;
      r.annulus_holds = r.annulus_holds && sl.annulus_ok;
      min_log = std::min(min_log, sl.min_ratio_log);
    }
    r.annulus_min_ratio = std::exp(min_log);
  }
  // Unenumerated ball bound and annulus bound leave the verdict on the exact part.
  const bool concl = r.pair_holds && (!r.enumerated || (r.ball_holds && r.annulus_holds));
  if (!pre)
    r.status = CheckStatus::HypothesesUnmet;
  else
    r.status = concl ? CheckStatus::Holds : CheckStatus::Violated;
  return r;
}

// ---------------------------------------------------------------------------
// Decay of the products along the sequence.

struct DecayEntry {
  long k = 0;
  Integer norm_sq;
  Rational value;           // |L_alpha_hat(z_k)|
  CertifiedReal log_norm;   // log |z_k| (projection)
  CertifiedReal log_P;      // log(|L| |z_k|^{d-1}), with the surrogate error folded in
};

struct DecaySeries {
  std::vector<DecayEntry> entries;
  SurrogateAlpha alpha;
  CertifiedReal slope;
  double slope_mid = 0.0;
  double slope_stderr = 0.0;
  Rational target;  // -f_d(beta)
  bool intersects_band = false;  // slope hits [-1.1 f, -0.9 f]
  bool wide_uncertainty = false;
  long skipped = 0;  // entries dropped: repeated norm or surrogate error too large
};

/// f_d(beta) = (d-2) beta^2 + (2d-3) beta.
inline Rational f_map(int d, const Rational& beta) {
  if (d < 2) throw ArgumentError("f_map needs d >= 2");
  if (beta < 0) throw ArgumentError("f_map needs beta >= 0");
  Rational r = Rational(d - 2) * beta * beta + Rational(2 * d - 3) * beta;
  r.canonicalize();
  return r;
}

namespace detail {

struct LinearFit {
  CertifiedReal slope;
  double mid = 0.0;
  double stderr_ = 0.0;
};

/// Unweighted least squares with interval propagation through the closed form.
inline LinearFit fit_slope(const std::vector<CertifiedReal>& x, const std::vector<CertifiedReal>& y,
                           mpfr_prec_t prec) {
  const std::size_t n = x.size();
  CertifiedReal nn = CertifiedReal::from_integer(static_cast<long>(n), prec);
  CertifiedReal sx = CertifiedReal::from_integer(0, prec), sy = sx;
  for (std::size_t i = 0; i < n; ++i) {
    sx = sx + x[i];
    sy = sy + y[i];
  }
  CertifiedReal mx = sx / nn, my = sy / nn;
  CertifiedReal sxx = CertifiedReal::from_integer(0, prec), sxy = sxx;
  for (std::size_t i = 0; i < n; ++i) {
    CertifiedReal dx = x[i] - mx;
    sxx = sxx + dx * dx;
    sxy = sxy + dx * (y[i] - my);
  }
  LinearFit f;
  f.slope = sxy / sxx;
  f.mid = f.slope.mid_double();
  double mxd = mx.mid_double(), myd = my.mid_double(), sxxd = sxx.mid_double();
  double rss = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    double res = (y[i].mid_double() - myd) - f.mid * (x[i].mid_double() - mxd);
    rss += res * res;
  }
  f.stderr_ = n > 2 ? std::sqrt(rss / static_cast<double>(n - 2) / sxxd) : std::numeric_limits<double>::infinity();
  return f;
}

}  // namespace detail

inline DecaySeries decay_series(const ConstructionState& s, const SurrogateAlpha& a) {
  const int d = s.d();
  const mpfr_prec_t prec = 256;
  DecaySeries out;
  out.alpha = a;
  out.target = -f_map(d, s.beta());
  CertifiedReal R = sqrt(CertifiedReal::from_rational(a.R_sq, prec));
  Integer last_norm = -1;
  for (long k = 1; k < a.index; ++k) {
    Integer n = s.proj_norm_sq(static_cast<std::size_t>(k));
    if (n <= last_norm) {
      ++out.skipped;
      continue;
    }
    DecayEntry e;
    e.k = k;
    e.norm_sq = n;
    e.value = abs(form_value(a.alpha, s.at(static_cast<std::size_t>(k))));
    CertifiedReal N = CertifiedReal::from_integer(n, prec);
    CertifiedReal err = R * sqrt(N);
    CertifiedReal L = CertifiedReal::from_rational(e.value, prec);
    CertifiedReal lo = L - err, hi = L + err;
    if (!lo.positive()) {
      ++out.skipped;
      continue;
    }
    CertifiedReal Lenc = CertifiedReal::hull(lo, hi);
    CertifiedReal logN = log(N);
    CertifiedReal half = CertifiedReal::from_rational(Rational(1, 2), prec);
    e.log_norm = half * logN;
    e.log_P = log(Lenc) + CertifiedReal::from_rational(Rational(d - 1, 2), prec) * logN;
    last_norm = n;
    out.entries.push_back(std::move(e));
  }
  if (out.entries.size() < 4) throw InsufficientData("decay series needs at least 4 usable points");
  std::vector<CertifiedReal> xs, ys;
  for (const auto& e : out.entries) {
    xs.push_back(e.log_norm);
    ys.push_back(e.log_P);
  }
  auto fit = detail::fit_slope(xs, ys, prec);
  out.slope = fit.slope;
  out.slope_mid = fit.mid;
  out.slope_stderr = fit.stderr_;
  const double f = -out.target.get_d();
  out.intersects_band = out.slope.hi_double() >= -1.1 * f && out.slope.lo_double() <= -0.9 * f;
  out.wide_uncertainty = f < 0.1 || out.slope_stderr > 0.1 * f;
  return out;
}

// ---------------------------------------------------------------------------
// Separation of non-multiples.

struct BestProduct {
  IntVector vector;
  Integer norm_sq;
  Rational value;
  CertifiedReal normalized;  // |L| |z|^{d-1} |z|^{f}
};

struct SeparationReport {
  Integer X_sq;
  SurrogateAlpha alpha;
  Rational exponent;  // d - 1 + f - (d-1) beta, applied to |z|
  bool empty = true;
  std::uint64_t points = 0;
  std::uint64_t nonmultiples = 0;
  CertifiedReal c_sep;  // min over non-multiples of |L| |z|^{exponent}
  std::optional<IntVector> minimizer;
  std::vector<BestProduct> best;
  CertifiedReal best_max, best_min;
  CertifiedReal factor_c;  // c_sep / best_max
  bool positive = false;
  std::size_t finalists = 0;
};

inline SeparationReport separation_check(const ConstructionState& s, const SurrogateAlpha& a, const Integer& X_sq,
                                         const EnumerationConfig& cfg = {}) {
  const int d = s.d();
  const mpfr_prec_t prec = 256;
  SeparationReport r;
  r.X_sq = X_sq;
  r.alpha = a;
  const Rational f = f_map(d, s.beta());
  r.exponent = Rational(d - 1) + f - Rational(d - 1) * s.beta();
  r.exponent.canonicalize();
  const Rational half_exp = r.exponent / 2;
  const double half_exp_d = half_exp.get_d();

  BestApproxList list = best_approximations(a.alpha, X_sq, cfg);
  detail::Exclusions ex;
  CertifiedReal Rr = sqrt(CertifiedReal::from_rational(a.R_sq, prec));
  Rational best_half = (Rational(d - 1) + f) / 2;
  best_half.canonicalize();
  for (const auto& rec : list.records) {
    auto sv = detail::small_canonical(rec.vector);
    if (!sv) throw BudgetExceeded("best approximation vector exceeds the enumeration range");
    ex.multiples_of.push_back(*sv);
    if (rec.value == 0) continue;
    BestProduct b;
    b.vector = rec.vector;
    b.norm_sq = rec.proj_norm_sq;
    b.value = rec.value;
    CertifiedReal N = CertifiedReal::from_integer(rec.proj_norm_sq, prec);
    CertifiedReal L = CertifiedReal::from_rational(rec.value, prec);
    CertifiedReal err = Rr * sqrt(N);
    CertifiedReal lo = L - err;
    if (!lo.positive()) lo = CertifiedReal::from_integer(0, prec);
    b.normalized = CertifiedReal::hull(lo, L + err) * pow(N, best_half);
    r.best.push_back(std::move(b));
  }

  struct Finalist {
    double score_log;
    std::vector<std::int64_t> proj;
    std::int64_t norm;
    Integer last;
    Integer num;
  };
  struct Slab {
    std::vector<Finalist> top;
    std::uint64_t points = 0, nonmult = 0;
  };
  constexpr std::size_t kKeep = 8;
  const double slack = 1e-6;
  auto slabs = visit_points<Slab>(a.alpha, X_sq, cfg, [&](const PointView& pv, Slab& out) {
    ++out.points;
    const bool special = ex.touches(pv.proj());
    double approx = pv.approx_value();
    double lognorm = std::log(static_cast<double>(pv.norm()));
    double score = approx > 0 ? std::log(approx) + half_exp_d * lognorm : -std::numeric_limits<double>::infinity();
    double cut = out.top.size() < kKeep ? std::numeric_limits<double>::infinity() : out.top[kKeep - 1].score_log + slack;
    if (!special) ++out.nonmult;
    if (!special && score > cut) return;
    std::optional<std::pair<Integer, Integer>> best;
    if (special) {
      best = detail::admissible_nearest(pv, ex);
      if (!best) return;
      auto near = pv.nearest();
      bool is_nearest = best->first == near[0].first;
      if (!is_nearest) {
        ++out.nonmult;
      } else {
        // the nearest is admissible, so the point counts once
        ++out.nonmult;
      }
      Integer num = best->second;
      if (num == 0) {
        score = -std::numeric_limits<double>::infinity();
      } else {
        score = detail::log_of_integer(num) - detail::log_of_integer(pv.denominator()) + half_exp_d * lognorm;
      }
      if (score > cut) return;
    } else {
      auto near = pv.nearest();
      best = near[0];
    }
    Finalist fz{score, pv.proj(), pv.norm(), best->first, best->second};
    auto pos = std::upper_bound(out.top.begin(), out.top.end(), fz.score_log,
                                [](double v, const Finalist& x) { return v < x.score_log; });
    out.top.insert(pos, std::move(fz));
    // Keep kKeep entries plus anything within the slack of the last kept.
    if (out.top.size() > kKeep) {
      double lim = out.top[kKeep - 1].score_log + slack;
      while (out.top.size() > kKeep && out.top.back().score_log > lim) out.top.pop_back();
    }
  });
  std::vector<Finalist> all;
  for (auto& sl : slabs) {
    r.points += sl.points;
    r.nonmultiples += sl.nonmult;
    for (auto& f2 : sl.top) all.push_back(std::move(f2));
  }
  std::sort(all.begin(), all.end(), [](const Finalist& x, const Finalist& y) {
    if (x.score_log != y.score_log) return x.score_log < y.score_log;
    return x.proj < y.proj;
  });
  if (!all.empty()) {
    double lim = all.front().score_log + 1e-3;
    std::size_t keep = 0;
    while (keep < all.size() && (keep < kKeep || all[keep].score_log <= lim)) ++keep;
    all.resize(keep);
  }
  r.finalists = all.size();
  const Integer& D = integer_form(a.alpha).D;
  bool first = true;
  for (const auto& fz : all) {
    Rational v(fz.num, D);
    v.canonicalize();
    CertifiedReal N = CertifiedReal::from_integer(Integer(static_cast<long>(fz.norm)), prec);
    CertifiedReal L = CertifiedReal::from_rational(v, prec);
    CertifiedReal err = Rr * sqrt(N);
    CertifiedReal lo = L - err;
    if (!lo.nonnegative()) lo = CertifiedReal::from_integer(0, prec);
    CertifiedReal score = CertifiedReal::hull(lo, L + err) * pow(N, half_exp);
    if (first || score.upper().to_double() < r.c_sep.upper().to_double() ||
        (score.lower().to_double() < r.c_sep.lower().to_double())) {
      if (first) {
        r.c_sep = score;
      } else {
        BigFloat lo2 = mpfr_less_p(score.lower().get(), r.c_sep.lower().get()) ? score.lower() : r.c_sep.lower();
        BigFloat hi2 = mpfr_less_p(score.upper().get(), r.c_sep.upper().get()) ? score.upper() : r.c_sep.upper();
        r.c_sep = CertifiedReal::from_bounds(std::move(lo2), std::move(hi2));
      }
      if (first || score.upper().to_double() <= r.c_sep.upper().to_double()) {
        std::vector<Integer> c;
        for (auto x : fz.proj) c.emplace_back(static_cast<long>(x));
        c.push_back(fz.last);
        r.minimizer = IntVector(std::move(c));
      }
      first = false;
    }
  }
  r.empty = r.nonmultiples == 0 || all.empty();
  if (r.empty) {
    r.positive = true;  // +infinity sentinel
    return r;
  }
  if (!r.best.empty()) {
    r.best_max = r.best.front().normalized;
    r.best_min = r.best.front().normalized;
    for (const auto& b : r.best) {
      r.best_max = CertifiedReal::from_bounds(
          mpfr_greater_p(b.normalized.lower().get(), r.best_max.lower().get()) ? b.normalized.lower() : r.best_max.lower(),
          mpfr_greater_p(b.normalized.upper().get(), r.best_max.upper().get()) ? b.normalized.upper() : r.best_max.upper());
      r.best_min = CertifiedReal::from_bounds(
          mpfr_less_p(b.normalized.lower().get(), r.best_min.lower().get()) ? b.normalized.lower() : r.best_min.lower(),
          mpfr_less_p(b.normalized.upper().get(), r.best_min.upper().get()) ? b.normalized.upper() : r.best_min.upper());
    }
    if (r.best_max.positive()) r.factor_c = r.c_sep / r.best_max;
  }
  r.positive = r.c_sep.positive() && (r.best.empty() || r.factor_c.positive());
  return r;
}

// ---------------------------------------------------------------------------
// Asymptotic directions.

struct DirectionReport {
  std::vector<CertifiedReal> even_limit;  // unit vector enclosure of the projections, even k
  std::vector<CertifiedReal> odd_limit;
  std::vector<CertifiedReal> even_limit_full;  // same for the full vectors
  std::vector<CertifiedReal> odd_limit_full;
  CertifiedReal even_radius, odd_radius;
  int pair_count = 1;
  bool disjoint = false;
  CertifiedReal cross_cosine;       // projections of z_{n-2}, z_{n-1}
  CertifiedReal cross_cosine_full;  // full vectors
  double cross_cosine_gap = 0.0;    // | |cos| - 1/sqrt 2 |
  // Successive normalized distances |u_k - u_{k-2}|, u = z/|z| projected, by parity.
  std::vector<long> even_index, odd_index;
  std::vector<CertifiedReal> even_distances, odd_distances;
  long K = 0;
  bool monotone_after_K = false;
  long last_increase = -1;  // largest i with d_i >= d_{i-2} in its parity, or -1
  bool tail_ratio_ok = false;  // last two ratios <= 1/2, which bounds the limit radius
};

namespace detail {

/// |u/|u| - v/|v||^2 = 2 gram(u, v) / (S (S + <u, v>)), S = |u||v|.
inline CertifiedReal normalized_distance_sq(const IntVector& u, const IntVector& v, mpfr_prec_t prec) {
  Integer nu = norm_sq(u), nv = norm_sq(v), in = dot(u, v);
  Integer g = nu * nv - in * in;
  CertifiedReal S = sqrt(CertifiedReal::from_integer(nu * nv, prec));
  CertifiedReal denom = S * (S + CertifiedReal::from_integer(in, prec));
  return CertifiedReal::from_integer(2 * g, prec) / denom;
}

inline std::vector<CertifiedReal> unit(const IntVector& v, const CertifiedReal& radius, mpfr_prec_t prec) {
  CertifiedReal n = sqrt(CertifiedReal::from_integer(norm_sq(v), prec));
  CertifiedReal widen = CertifiedReal::hull(-radius, radius);
  std::vector<CertifiedReal> out;
  for (const auto& c : v.coords()) out.push_back(CertifiedReal::from_integer(c, prec) / n + widen);
  return out;
}

inline bool boxes_disjoint(const std::vector<CertifiedReal>& a, const std::vector<CertifiedReal>& b) {
  for (std::size_t i = 0; i < a.size(); ++i)
    if (a[i].disjoint(b[i])) return true;
  return false;
}

inline std::vector<CertifiedReal> negate(const std::vector<CertifiedReal>& a) {
  std::vector<CertifiedReal> out;
  for (const auto& x : a) out.push_back(-x);
  return out;
}

inline mpfr_prec_t direction_precision(const IntVector& v) {
  long bits = 0;
  for (const auto& c : v.coords()) bits = std::max(bits, bit_length(c));
  return static_cast<mpfr_prec_t>(4 * bits + 256);
}

/// Largest index whose distance is not certainly below its predecessor, or -1.
inline long last_increase(const std::vector<long>& idx, const std::vector<CertifiedReal>& ds) {
  long at = -1;
  for (std::size_t j = 1; j < ds.size(); ++j)
    if (!ds[j].certainly_less(ds[j - 1])) at = idx[j];
  return at;
}

}  // namespace detail

inline DirectionReport asymptotic_directions(const ConstructionState& s, long K = 0) {
  const std::size_t n = s.size();
  if (n < 8) throw InsufficientData("directions need at least 8 constructed vectors");
  DirectionReport r;
  r.K = K;
  const mpfr_prec_t prec = detail::direction_precision(s.at(n - 1));
  auto dist = [&](std::size_t i, bool full) {
    IntVector u = full ? s.at(i - 2) : s.at(i - 2).projection();
    IntVector v = full ? s.at(i) : s.at(i).projection();
    return sqrt(detail::normalized_distance_sq(u, v, prec));
  };
  // z_0 has zero projection; distances start at z_1 -> z_3.
  for (std::size_t i = 3; i < n; ++i) {
    auto& idx = i % 2 == 0 ? r.even_index : r.odd_index;
    auto& ds = i % 2 == 0 ? r.even_distances : r.odd_distances;
    idx.push_back(static_cast<long>(i));
    ds.push_back(dist(i, false));
  }
  r.last_increase = std::max(detail::last_increase(r.even_index, r.even_distances),
                             detail::last_increase(r.odd_index, r.odd_distances));
  // d_i compares z_{i-4}, z_{i-2}, z_i.
  r.monotone_after_K = r.last_increase - 4 < K;
  auto half = CertifiedReal::from_rational(Rational(1, 2), prec);
  auto tail_ok = [&](const std::vector<CertifiedReal>& ds) {
    std::size_t m = ds.size();
    if (m < 3) return false;
    return !(half * ds[m - 2]).certainly_less(ds[m - 1]) && !(half * ds[m - 3]).certainly_less(ds[m - 2]);
  };
  r.tail_ratio_ok = tail_ok(r.even_distances) && tail_ok(r.odd_distances);

  const std::size_t last = n - 1, prev = n - 2;
  const std::size_t e_idx = last % 2 == 0 ? last : prev;
  const std::size_t o_idx = last % 2 == 1 ? last : prev;
  auto two = CertifiedReal::from_integer(2, prec);
  // Geometric tail with ratio <= 1/2: the limit lies within twice the last step.
  r.even_radius = two * r.even_distances.back();
  r.odd_radius = two * r.odd_distances.back();
  r.even_limit = detail::unit(s.at(e_idx).projection(), r.even_radius, prec);
  r.odd_limit = detail::unit(s.at(o_idx).projection(), r.odd_radius, prec);
  r.even_limit_full = detail::unit(s.at(e_idx), two * dist(e_idx, true), prec);
  r.odd_limit_full = detail::unit(s.at(o_idx), two * dist(o_idx, true), prec);
  r.disjoint = r.tail_ratio_ok && detail::boxes_disjoint(r.even_limit, r.odd_limit) &&
               detail::boxes_disjoint(r.even_limit, detail::negate(r.odd_limit));
  r.pair_count = r.disjoint ? 2 : 1;

  auto cosine = [&](const IntVector& u, const IntVector& v) {
    CertifiedReal in = CertifiedReal::from_integer(dot(u, v), prec);
    CertifiedReal S = sqrt(CertifiedReal::from_integer(norm_sq(u) * norm_sq(v), prec));
    return in / S;
  };
  r.cross_cosine = cosine(s.at(prev).projection(), s.at(last).projection());
  r.cross_cosine_full = cosine(s.at(prev), s.at(last));
  r.cross_cosine_gap = std::fabs(std::fabs(r.cross_cosine.mid_double()) - std::sqrt(0.5));
  return r;
}

/// log10 of a positive enclosure midpoint, finite even below the double range.
inline double log10_mid(const CertifiedReal& x) {
  if (!x.positive()) return -std::numeric_limits<double>::infinity();
  long e = 0;
  double m = mpfr_get_d_2exp(&e, x.upper().get(), MPFR_RNDN);
  return std::log10(m) + static_cast<double>(e) * std::log10(2.0);
}

}  // namespace dioph
