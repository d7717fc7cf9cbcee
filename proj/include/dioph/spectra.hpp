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
#include <numbers>
#include <optional>
#include <string>
#include <thread>
#include <utility>
#include <vector>

#include "dioph/certified_real.hpp"
#include "dioph/construction.hpp"
#include "dioph/diagnostics.hpp"
#include "dioph/enumeration.hpp"
#include "dioph/types.hpp"

namespace dioph {

// ---------------------------------------------------------------------------
// Exponent map.

/// Positive root of (d-2) b^2 + (2d-3) b = omega, written without cancellation.
inline CertifiedReal f_inv(int d, const Rational& omega, mpfr_prec_t prec = 256) {
  if (d < 2) throw ArgumentError("f_inv needs d >= 2");
  if (omega < 0) throw ArgumentError("f_inv needs omega >= 0");
  const long a = 2L * d - 3;
  CertifiedReal w = CertifiedReal::from_rational(omega, prec);
  CertifiedReal disc = CertifiedReal::from_integer(a * a, prec) +
                       CertifiedReal::from_integer(4L * (d - 2), prec) * w;
  CertifiedReal den = CertifiedReal::from_integer(a, prec) + sqrt(disc);
  return CertifiedReal::from_integer(2, prec) * w / den;
}

// ---------------------------------------------------------------------------
// Real roots of integer polynomials.

/// Coefficients low to high.
using Polynomial = std::vector<Integer>;

namespace detail {

using RPoly = std::vector<Rational>;

inline void trim(RPoly& p) {
  while (!p.empty() && p.back() == 0) p.pop_back();
}

inline Rational eval(const RPoly& p, const Rational& x) {
  Rational acc = 0;
  for (auto it = p.rbegin(); it != p.rend(); ++it) acc = acc * x + *it;
  return acc;
}

inline RPoly remainder(RPoly a, const RPoly& b) {
  while (a.size() >= b.size() && !a.empty()) {
    Rational q = a.back() / b.back();
    std::size_t shift = a.size() - b.size();
    for (std::size_t i = 0; i < b.size(); ++i) a[i + shift] -= q * b[i];
    a.pop_back();
    trim(a);
  }
  return a;
}

inline std::vector<RPoly> sturm_sequence(const Polynomial& p) {
  RPoly p0(p.begin(), p.end());
  trim(p0);
  RPoly p1;
  for (std::size_t i = 1; i < p0.size(); ++i) p1.push_back(p0[i] * Rational(static_cast<long>(i)));
  std::vector<RPoly> seq{p0, p1};
  while (seq.back().size() > 1) {
    RPoly r = remainder(seq[seq.size() - 2], seq.back());
    if (r.empty()) break;
    for (auto& c : r) c = -c;
    seq.push_back(std::move(r));
  }
  return seq;
}

inline int sign_changes(const std::vector<RPoly>& seq, const Rational& x) {
  int changes = 0, last = 0;
  for (const auto& p : seq) {
    int s = sgn(eval(p, x));
    if (s == 0) continue;
    if (last != 0 && s != last) ++changes;
    last = s;
  }
  return changes;
}

}  // namespace detail

/// The unique root of a polynomial in the half-open interval (lo, hi].
struct RootEnclosure {
  Rational lo, hi;
  double mid() const { return Rational((lo + hi) / 2).get_d(); }
};

inline Rational eval(const Polynomial& p, const Rational& x) {
  return detail::eval(detail::RPoly(p.begin(), p.end()), x);
}

/// Isolates all real roots of a squarefree polynomial, largest first.
inline std::vector<RootEnclosure> isolate_real_roots(const Polynomial& p) {
  if (p.size() < 2 || p.back() == 0) throw ArgumentError("polynomial must have positive degree");
  auto seq = detail::sturm_sequence(p);
  if (seq.back().size() != 1) throw ArgumentError("polynomial is not squarefree");
  // Cauchy bound.
  Rational bound = 0;
  for (std::size_t i = 0; i + 1 < p.size(); ++i) bound = std::max(bound, Rational(abs(p[i]), abs(p.back())));
  bound += 1;
  std::vector<RootEnclosure> out;
  auto rec = [&](auto&& self, const Rational& a, const Rational& b, int va, int vb) -> void {
    int count = va - vb;
    if (count == 0) return;
    if (count == 1) {
      out.push_back({a, b});
      return;
    }
    Rational m = (a + b) / 2;
    int vm = detail::sign_changes(seq, m);
    self(self, m, b, vm, vb);
    self(self, a, m, va, vm);
  };
  Rational lo = -bound, hi = bound;
  rec(rec, lo, hi, detail::sign_changes(seq, lo), detail::sign_changes(seq, hi));
  return out;
}

namespace detail {

inline RootEnclosure bisect_root(const RPoly& rp, RootEnclosure r, const Rational& width) {
  if (eval(rp, r.hi) == 0) return {r.hi, r.hi};
  int s_hi = sgn(eval(rp, r.hi));
  while (r.hi - r.lo >= width) {
    Rational m = (r.lo + r.hi) / 2;
    int s = sgn(eval(rp, m));
    if (s == 0) return {m, m};
    if (s == s_hi)
      r.hi = m;
    else
      r.lo = m;
  }
  return r;
}

inline Rational pow2(long e) {
  Rational t(1);
  if (e >= 0)
    mpq_mul_2exp(t.get_mpq_t(), t.get_mpq_t(), static_cast<mp_bitcnt_t>(e));
  else
    mpq_div_2exp(t.get_mpq_t(), t.get_mpq_t(), static_cast<mp_bitcnt_t>(-e));
  return t;
}

}  // namespace detail

/// Shrinks an isolating interval below width 2^-bits. Long refinements run
/// Newton in floating point and are accepted only after an exact sign change
/// inside the original interval.
inline RootEnclosure refine_root(const Polynomial& p, RootEnclosure r, long bits) {
  detail::RPoly rp(p.begin(), p.end());
  const Rational width = detail::pow2(-bits);
  constexpr long kBisect = 96;
  if (bits <= kBisect) return detail::bisect_root(rp, r, width);
  RootEnclosure coarse = detail::bisect_root(rp, r, detail::pow2(-kBisect));
  if (coarse.lo == coarse.hi) return coarse;
  const mpfr_prec_t prec = static_cast<mpfr_prec_t>(bits + 64);
  mpfr_t x, fx, dfx, t;
  mpfr_inits2(prec, x, fx, dfx, t, static_cast<mpfr_ptr>(nullptr));
  Rational mid = (coarse.lo + coarse.hi) / 2;
  mpfr_set_q(x, mid.get_mpq_t(), MPFR_RNDN);
  // Quadratic convergence from 96 correct bits.
  long good = kBisect;
  for (int it = 0; it < 64 && good < bits + 64; ++it, good *= 2) {
    mpfr_set_ui(fx, 0, MPFR_RNDN);
    mpfr_set_ui(dfx, 0, MPFR_RNDN);
    for (std::size_t i = p.size(); i-- > 0;) {
      mpfr_mul(dfx, dfx, x, MPFR_RNDN);
      mpfr_add(dfx, dfx, fx, MPFR_RNDN);
      mpfr_mul(fx, fx, x, MPFR_RNDN);
      mpfr_add_z(fx, fx, p[i].get_mpz_t(), MPFR_RNDN);
    }
    mpfr_div(t, fx, dfx, MPFR_RNDN);
    mpfr_sub(x, x, t, MPFR_RNDN);
  }
  Rational c;
  mpfr_get_q(c.get_mpq_t(), x);
  mpfr_clears(x, fx, dfx, t, static_cast<mpfr_ptr>(nullptr));
  const Rational eps = detail::pow2(-(bits + 2));
  RootEnclosure fine{c - eps, c + eps};
  fine.lo.canonicalize();
  fine.hi.canonicalize();
  if (coarse.lo < fine.lo && fine.hi <= coarse.hi) {
    int s_lo = sgn(detail::eval(rp, fine.lo));
    int s_hi = sgn(detail::eval(rp, fine.hi));
    if (s_lo != 0 && s_hi != 0 && s_lo != s_hi) return fine;
  }
  return detail::bisect_root(rp, coarse, width);
}

inline CertifiedReal enclose(const RootEnclosure& r, mpfr_prec_t prec) {
  return CertifiedReal::hull(CertifiedReal::from_rational(r.lo, prec), CertifiedReal::from_rational(r.hi, prec));
}

// ---------------------------------------------------------------------------
// Companion forms.

struct FieldSpec {
  std::string name;
  Polynomial poly;  // monic, irreducible, totally real
};

/// Built-in totally real fields of degree d.
inline FieldSpec builtin_field(int d) {
  auto P = [](std::initializer_list<long> c) {
    Polynomial p;
    for (long v : c) p.emplace_back(v);
    return p;
  };
  switch (d) {
    case 2: return {"x^2-x-1", P({-1, -1, 1})};
    case 3: return {"x^3-3x-1", P({-1, -3, 0, 1})};
    case 4: return {"x^4-4x^2+2", P({2, 0, -4, 0, 1})};
    case 5: return {"x^5+x^4-4x^3-3x^2+3x+1", P({1, 3, -3, -4, 1, 1})};
    default: throw ArgumentError("no built-in field of degree " + std::to_string(d));
  }
}

inline std::string polynomial_string(const Polynomial& p) {
  std::string s;
  for (std::size_t i = p.size(); i-- > 0;) {
    const Integer& c = p[i];
    if (c == 0) continue;
    Integer a = abs(c);
    if (!s.empty() || c < 0) s += c < 0 ? "-" : "+";
    if (a != 1 || i == 0) s += a.get_str();
    if (i >= 1) s += "x";
    if (i >= 2) s += "^" + std::to_string(i);
  }
  return s.empty() ? "0" : s;
}

/// L(z) = sum_i c_i z_i, either with exact rational c or with c_i = theta^i for
/// an algebraic theta given by its polynomial and an isolating interval.
struct LinearForm {
  enum class Kind { Rational, PowerBasis };
  Kind kind = Kind::Rational;
  std::vector<Rational> rational;  // Kind::Rational
  Polynomial poly;                 // Kind::PowerBasis
  RootEnclosure root;
  std::size_t dim = 0;

  static LinearForm from_rational(std::vector<Rational> c) {
    LinearForm f;
    f.dim = c.size();
    f.rational = std::move(c);
    return f;
  }
  static LinearForm power_basis(Polynomial poly, RootEnclosure root, std::size_t dim) {
    LinearForm f;
    f.kind = Kind::PowerBasis;
    f.poly = std::move(poly);
    f.root = std::move(root);
    f.dim = dim;
    return f;
  }

  /// Coefficient enclosures good to about `prec` bits.
  std::vector<CertifiedReal> coefficients(mpfr_prec_t prec) const {
    if (kind == Kind::Rational) {
      std::vector<CertifiedReal> c;
      for (const auto& q : rational) c.push_back(CertifiedReal::from_rational(q, prec));
      return c;
    }
    return coefficients(prec, refine_root(poly, root, static_cast<long>(prec) + 16));
  }

  /// Same, from a root enclosure already refined to about `prec` bits.
  std::vector<CertifiedReal> coefficients(mpfr_prec_t prec, const RootEnclosure& refined) const {
    std::vector<CertifiedReal> c;
    if (kind == Kind::Rational) return coefficients(prec);
    CertifiedReal t = enclose(refined, prec);
    CertifiedReal pw = CertifiedReal::from_integer(1, prec);
    for (std::size_t i = 0; i < dim; ++i) {
      c.push_back(pw);
      pw = pw * t;
    }
    return c;
  }

  std::optional<Rational> exact_value(const IntVector& z) const {
    if (kind != Kind::Rational) return std::nullopt;
    Rational acc = 0;
    for (std::size_t i = 0; i < dim; ++i) acc += rational[i] * Rational(z[i]);
    return acc;
  }
};

inline CertifiedReal evaluate(const std::vector<CertifiedReal>& coef, const IntVector& z, mpfr_prec_t prec) {
  CertifiedReal acc = CertifiedReal::from_integer(0, prec);
  for (std::size_t i = 0; i < coef.size(); ++i) acc = acc + coef[i] * CertifiedReal::from_integer(z[i], prec);
  return acc;
}

inline CertifiedReal evaluate(const std::vector<CertifiedReal>& coef, const std::vector<CertifiedReal>& z) {
  CertifiedReal acc = coef[0] * z[0];
  for (std::size_t i = 1; i < coef.size(); ++i) acc = acc + coef[i] * z[i];
  return acc;
}

/// The d conjugate embeddings of the power basis, largest root first.
inline std::vector<LinearForm> companion_forms(const FieldSpec& field) {
  const std::size_t d = field.poly.size() - 1;
  if (field.poly.back() != 1) throw ArgumentError("field polynomial must be monic");
  auto roots = isolate_real_roots(field.poly);
  if (roots.size() != d) throw ArgumentError("polynomial " + field.name + " is not totally real");
  std::vector<LinearForm> forms;
  for (auto& r : roots) forms.push_back(LinearForm::power_basis(field.poly, r, d));
  return forms;
}

inline std::vector<LinearForm> companion_forms(int d) { return companion_forms(builtin_field(d)); }

/// Forms from explicit rational rows.
inline std::vector<LinearForm> companion_forms(const std::vector<std::vector<Rational>>& rows) {
  std::vector<LinearForm> forms;
  for (const auto& r : rows) {
    if (!rows.empty() && r.size() != rows.front().size()) throw ArgumentError("rows have different lengths");
    forms.push_back(LinearForm::from_rational(r));
  }
  return forms;
}

// ---------------------------------------------------------------------------
// Lattices.

enum class Nondegeneracy { Holds, Indeterminate, Violated, NotApplicable };

inline const char* to_string(Nondegeneracy n) {
  switch (n) {
    case Nondegeneracy::Holds: return "holds";
    case Nondegeneracy::Indeterminate: return "indeterminate";
    case Nondegeneracy::Violated: return "violated";
    case Nondegeneracy::NotApplicable: return "not-applicable";
  }
  return "?";
}

struct LatticeSpec {
  int d = 0;
  std::vector<LinearForm> forms;   // rows of the lattice matrix
  std::string kind;                // "norm-form", "rational-rows" or "assembled"
  std::string field;               // polynomial of the companion field, if any
  bool norm_form = false;          // |prod L_i(z)| >= 1 on nonzero integer z
  std::optional<Rational> beta;
  std::optional<long> alpha_index;
  std::optional<Rational> target;  // f_d(beta) / d
  std::vector<std::string> warnings;
  CertifiedReal determinant;
  Nondegeneracy nondegeneracy = Nondegeneracy::NotApplicable;
  std::vector<CertifiedReal> companion_at_limits;  // L_i(zeta_j), i companion, j in {1, 2}
};

namespace detail {

inline CertifiedReal leibniz_determinant(const std::vector<std::vector<CertifiedReal>>& m, mpfr_prec_t prec) {
  const std::size_t n = m.size();
  std::vector<std::size_t> perm(n);
  for (std::size_t i = 0; i < n; ++i) perm[i] = i;
  CertifiedReal det = CertifiedReal::from_integer(0, prec);
  do {
    int inversions = 0;
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = i + 1; j < n; ++j)
        if (perm[i] > perm[j]) ++inversions;
    CertifiedReal term = CertifiedReal::from_integer(inversions % 2 == 0 ? 1 : -1, prec);
    for (std::size_t i = 0; i < n; ++i) term = term * m[i][perm[i]];
    det = det + term;
  } while (std::next_permutation(perm.begin(), perm.end()));
  return det;
}

inline CertifiedReal spec_determinant(const std::vector<LinearForm>& forms, mpfr_prec_t prec) {
  std::vector<std::vector<CertifiedReal>> m;
  for (const auto& f : forms) m.push_back(f.coefficients(prec));
  return leibniz_determinant(m, prec);
}

}  // namespace detail

inline LatticeSpec lattice_from_forms(std::vector<LinearForm> forms, std::string kind) {
  LatticeSpec s;
  s.d = static_cast<int>(forms.size());
  for (const auto& f : forms)
    if (f.dim != forms.size()) throw ArgumentError("lattice needs d forms in d variables");
  s.forms = std::move(forms);
  s.kind = std::move(kind);
  s.determinant = detail::spec_determinant(s.forms, 256);
  if (s.determinant.contains_zero()) throw DegeneracyError("forms are not certified linearly independent");
  return s;
}

/// The lattice of the ring of integers power basis of a built-in field.
inline LatticeSpec norm_form_lattice(const FieldSpec& field) {
  LatticeSpec s = lattice_from_forms(companion_forms(field), "norm-form");
  s.field = field.name;
  s.norm_form = true;
  return s;
}

/// Companions L_1..L_{d-1} (the first d-1 embeddings of the built-in field)
/// and L_alpha for the run's last exact alpha.
inline LatticeSpec assemble_lattice(const ConstructionState& st, const std::vector<LinearForm>& companions,
                                    const DirectionReport* directions = nullptr, std::string field = {}) {
  const int d = st.d();
  if (companions.size() != static_cast<std::size_t>(d - 1))
    throw ArgumentError("assembly needs d - 1 companion forms");
  SurrogateAlpha a = surrogate_alpha(st);
  std::vector<LinearForm> forms = companions;
  forms.push_back(LinearForm::from_rational(a.alpha.coords()));
  LatticeSpec s = lattice_from_forms(std::move(forms), "assembled");
  s.field = std::move(field);
  s.beta = st.beta();
  s.alpha_index = a.index;
  s.target = f_map(d, st.beta()) / Rational(d);
  s.target->canonicalize();
  if (st.beta() < Rational(d, d - 1))
    s.warnings.push_back("beta below d/(d-1): the target exponent is outside the assembly hypothesis");
  if (directions) {
    s.nondegeneracy = Nondegeneracy::Holds;
    for (const auto* zeta : {&directions->even_limit_full, &directions->odd_limit_full}) {
      mpfr_prec_t prec = (*zeta)[0].prec();
      for (std::size_t i = 0; i + 1 < s.forms.size(); ++i) {
        CertifiedReal v = evaluate(s.forms[i].coefficients(prec), *zeta);
        s.companion_at_limits.push_back(v);
        if (v.contains_zero() && s.nondegeneracy == Nondegeneracy::Holds) s.nondegeneracy = Nondegeneracy::Indeterminate;
      }
    }
    if (s.nondegeneracy == Nondegeneracy::Indeterminate)
      s.warnings.push_back("companion forms not certified nonzero at the limit directions");
  }
  return s;
}

// ---------------------------------------------------------------------------
// Exponent estimation.

inline constexpr const char* kOmegaCaveat =
    "finite-data trend: the exponent is a limsup over infinitely many points and is not computable from any "
    "finite enumeration; record ratios are reported, not a limit";

struct OmegaRecord {
  IntVector z;
  std::vector<CertifiedReal> v;
  CertifiedReal norm;   // |v|
  CertifiedReal Pi;     // prod |v_i|^{1/d}
  CertifiedReal ratio;  // -log Pi / log |v|
  bool infinite = false;  // some coordinate is exactly zero
  bool probe = false;     // supplied point beyond the exhaustive range
};

struct OmegaEstimate {
  std::vector<OmegaRecord> records;
  CertifiedReal omega_hat;  // ratio of the last record, 0 if none
  bool omega_infinite = false;
  std::optional<Rational> target;
  std::uint64_t budget = 0;
  std::uint64_t points_examined = 0;
  std::uint64_t probes_examined = 0;
  double radius_sq = 0.0;  // every preimage with |v|^2 below this is examined
  bool partial = false;
  std::uint64_t indeterminate = 0;     // points whose coordinates could not be separated from 0
  std::uint64_t below_norm_bound = 0;  // certified prod |v_i| < 1 (norm-form lattices)
  std::uint64_t infinite_witnesses = 0;
  double min_log_norm = 0.0;  // records need log |v| at least this
  std::vector<OmegaRecord> probe_points;  // every probe, record or not
  bool trend_increasing = true;
  std::string caveat = kOmegaCaveat;
};

namespace detail {

struct OmegaPoint {
  double key;
  std::vector<long> z;
};

/// Canonical (first nonzero coordinate positive) integer points with
/// |A z|^2 <= T, by Fincke-Pohst on the double Gram matrix.
inline std::vector<OmegaPoint> fincke_pohst(const std::vector<std::vector<double>>& A, double T,
                                            std::size_t cap) {
  const std::size_t d = A.size();
  std::vector<std::vector<double>> G(d, std::vector<double>(d, 0.0));
  for (std::size_t i = 0; i < d; ++i)
    for (std::size_t j = 0; j < d; ++j)
      for (std::size_t r = 0; r < d; ++r) G[i][j] += A[r][i] * A[r][j];
  // Q(z) = sum_i q[i][i] (z_i + sum_{j>i} q[i][j] z_j)^2
  std::vector<std::vector<double>> q = G;
  for (std::size_t i = 0; i < d; ++i) {
    for (std::size_t j = i + 1; j < d; ++j) {
      q[j][i] = q[i][j];
      q[i][j] /= q[i][i];
    }
    for (std::size_t k = i + 1; k < d; ++k)
      for (std::size_t l = k; l < d; ++l) q[k][l] -= q[k][i] * q[i][l];
  }
  const double Tm = T * (1 + 1e-9) + 1e-9;
  std::vector<OmegaPoint> out;
  std::vector<long> z(d, 0);
  auto key_of = [&](const std::vector<long>& x) {
    double s = 0.0;
    for (std::size_t r = 0; r < d; ++r) {
      double v = 0.0;
      for (std::size_t i = 0; i < d; ++i) v += A[r][i] * static_cast<double>(x[i]);
      s += v * v;
    }
    return s;
  };
  auto rec = [&](auto&& self, std::size_t i_plus, double remaining) -> void {
    if (out.size() > cap) return;
    if (i_plus == 0) {
      bool zero = true;
      int first = 0;
      for (std::size_t i = 0; i < d; ++i)
        if (z[i] != 0) {
          zero = false;
          first = z[i] > 0 ? 1 : -1;
          break;
        }
      if (zero || first < 0) return;
      double k = key_of(z);
      if (k <= T) out.push_back({k, z});
      return;
    }
    const std::size_t i = i_plus - 1;
    double c = 0.0;
    for (std::size_t j = i + 1; j < d; ++j) c += q[i][j] * static_cast<double>(z[j]);
    double r = std::sqrt(std::max(0.0, remaining) / q[i][i]);
    long lo = static_cast<long>(std::ceil(-c - r - 1e-9));
    long hi = static_cast<long>(std::floor(-c + r + 1e-9));
    for (long v = lo; v <= hi; ++v) {
      z[i] = v;
      double t = static_cast<double>(v) + c;
      self(self, i, remaining - q[i][i] * t * t);
    }
    z[i] = 0;
  };
  rec(rec, d, Tm);
  return out;
}

struct Evaluated {
  std::vector<CertifiedReal> v;
  bool exact_zero = false;
  bool indeterminate = false;
};

/// Exact rational rows are used when `exact` is set (huge probes cancel
/// heavily) or when an enclosure cannot be separated from zero.
inline Evaluated evaluate_point(const LatticeSpec& spec, const std::vector<std::vector<CertifiedReal>>& coef,
                                const IntVector& z, mpfr_prec_t prec, bool exact) {
  Evaluated e;
  for (std::size_t i = 0; i < spec.forms.size(); ++i) {
    const LinearForm& f = spec.forms[i];
    CertifiedReal y;
    bool have = false;
    if (!exact || f.kind != LinearForm::Kind::Rational) {
      y = evaluate(coef[i], z, prec);
      have = !y.contains_zero() || f.kind != LinearForm::Kind::Rational;
    }
    if (!have) {
      Rational x = *f.exact_value(z);
      if (x == 0) e.exact_zero = true;
      y = CertifiedReal::from_rational(x, prec);
    }
    if (y.contains_zero() && !e.exact_zero) e.indeterminate = true;
    e.v.push_back(std::move(y));
  }
  return e;
}

inline mpfr_prec_t point_precision(const IntVector& z) {
  long bits = 0;
  for (const auto& c : z.coords()) bits = std::max(bits, bit_length(c));
  return static_cast<mpfr_prec_t>(128 + 2 * bits);
}

}  // namespace detail

/// Examines the H smallest canonical preimages by |v| (ties broken by z), then
/// merges the probes in by |v|. Records strictly improve, with certainty, on
/// every earlier point.
/// Points with log |v| < min_log_norm are examined but never become records:
/// the ratio's sensitivity grows like 1 / log |v|.
inline constexpr double kMinLogNorm = 1.0;

inline OmegaEstimate omega_estimate(const LatticeSpec& spec, std::uint64_t H,
                                    const std::vector<IntVector>& probes = {}, const EnumerationConfig& cfg = {},
                                    double min_log_norm = kMinLogNorm) {
  const std::size_t d = static_cast<std::size_t>(spec.d);
  OmegaEstimate est;
  est.budget = H;
  est.target = spec.target;
  est.min_log_norm = min_log_norm;
  if (H > cfg.budget) {
    est.partial = true;
    H = cfg.budget;
  }
  const mpfr_prec_t base = 128;
  std::vector<std::vector<CertifiedReal>> coef_base;
  std::vector<std::vector<double>> A;
  for (const auto& f : spec.forms) {
    coef_base.push_back(f.coefficients(base));
    std::vector<double> row;
    for (const auto& c : coef_base.back()) row.push_back(c.mid_double());
    A.push_back(std::move(row));
  }
  // Radius for about 2H canonical points; grow until H are inside.
  const double vol = std::pow(std::numbers::pi, d / 2.0) / std::tgamma(d / 2.0 + 1.0);
  const double det = std::fabs(spec.determinant.mid_double());
  double T = std::pow(4.0 * static_cast<double>(std::max<std::uint64_t>(H, 1)) * det / vol, 2.0 / d);
  std::vector<detail::OmegaPoint> pts;
  if (H > 0) {
    for (int attempt = 0; attempt < 64; ++attempt) {
      pts = detail::fincke_pohst(A, T, static_cast<std::size_t>(H) * 64 + 1024);
      if (pts.size() > static_cast<std::size_t>(H) * 64 + 1024) {
        T /= 2;
        continue;
      }
      if (pts.size() >= H) break;
      T *= 1.5;
    }
    std::sort(pts.begin(), pts.end(), [](const detail::OmegaPoint& a, const detail::OmegaPoint& b) {
      if (a.key != b.key) return a.key < b.key;
      return a.z < b.z;
    });
    if (pts.size() > H) {
      est.radius_sq = pts[static_cast<std::size_t>(H)].key;
      pts.resize(static_cast<std::size_t>(H));
    } else {
      est.radius_sq = T;
    }
  }

  struct Item {
    double key;
    IntVector z;
    bool probe;
  };
  std::vector<Item> items;
  items.reserve(pts.size() + probes.size());
  for (auto& p : pts) {
    std::vector<Integer> c;
    for (long x : p.z) c.emplace_back(x);
    items.push_back({p.key, IntVector(std::move(c)), false});
  }
  std::vector<Item> extra;  // keyed by log |v|^2, all beyond the exhaustive range
  mpfr_prec_t probe_prec = base;
  for (const auto& z : probes) probe_prec = std::max(probe_prec, detail::point_precision(z));
  std::vector<std::vector<CertifiedReal>> coef_probe;
  if (!probes.empty())
    for (const auto& f : spec.forms)
      coef_probe.push_back(f.kind == LinearForm::Kind::Rational
                               ? f.coefficients(probe_prec)
                               : f.coefficients(probe_prec, refine_root(f.poly, f.root, probe_prec + 16)));
  for (const auto& z : probes) {
    if (z.dim() != d) throw ArgumentError("probe dimension does not match the lattice");
    if (z.is_zero()) continue;
    IntVector c = z;
    for (const auto& x : z.coords())
      if (x != 0) {
        if (x < 0) c = -z;
        break;
      }
    auto e = detail::evaluate_point(spec, coef_probe, c, probe_prec, true);
    CertifiedReal n2 = CertifiedReal::from_integer(0, probe_prec);
    for (auto& x : e.v) n2 = n2 + x * x;
    // Probes inside the exhaustive range are already examined.
    if (n2.hi_double() <= est.radius_sq) continue;
    long ex = 0;
    double m = mpfr_get_d_2exp(&ex, n2.upper().get(), MPFR_RNDN);
    extra.push_back({std::log(m) + static_cast<double>(ex) * std::numbers::ln2, std::move(c), true});
  }
  std::sort(extra.begin(), extra.end(), [](const Item& a, const Item& b) { return a.key < b.key; });
  for (auto& e : extra) items.push_back(std::move(e));

  // Evaluate in parallel, scan sequentially.
  struct Value {
    detail::Evaluated e;
    CertifiedReal norm, Pi, ratio, prod;
    bool small = false;
    bool nonpositive = false;
  };
  std::vector<Value> values(items.size());
  auto eval_one = [&](std::size_t idx) {
    const Item& it = items[idx];
    Value& out = values[idx];
    mpfr_prec_t prec = it.probe ? probe_prec : base;
    out.e = detail::evaluate_point(spec, it.probe ? coef_probe : coef_base, it.z, prec, it.probe);
    CertifiedReal n2 = CertifiedReal::from_integer(0, prec);
    for (auto& x : out.e.v) n2 = n2 + x * x;
    out.norm = sqrt(n2);
    if (out.e.exact_zero || out.e.indeterminate) return;
    out.prod = CertifiedReal::from_integer(1, prec);
    for (auto& x : out.e.v) out.prod = out.prod * abs(x);
    // prod >= 1 gives ratio <= 0, which never makes a record.
    if (out.prod.lo_at_least(Integer(1))) {
      out.nonpositive = true;
      return;
    }
    CertifiedReal logsum = CertifiedReal::from_integer(0, prec);
    for (auto& x : out.e.v) logsum = logsum + log(abs(x));
    CertifiedReal logPi = logsum / CertifiedReal::from_integer(static_cast<long>(d), prec);
    out.Pi = exp(logPi);
    CertifiedReal lognorm = log(out.norm);
    if (!lognorm.positive() || lognorm.lo_double() < min_log_norm) {
      out.small = true;
      return;
    }
    out.ratio = -logPi / lognorm;
  };
  const unsigned workers = std::max(1u, std::min<unsigned>(cfg.resolved_workers(), 64));
  if (workers == 1 || items.size() < 1024) {
    for (std::size_t i = 0; i < items.size(); ++i) eval_one(i);
  } else {
    std::vector<std::thread> pool;
    for (unsigned w = 0; w < workers; ++w)
      pool.emplace_back([&, w] {
        for (std::size_t i = w; i < items.size(); i += workers) eval_one(i);
      });
    for (auto& t : pool) t.join();
  }

  bool have_best = false;
  BigFloat best_hi;
  CertifiedReal one = CertifiedReal::from_integer(1, base);
  for (std::size_t i = 0; i < items.size(); ++i) {
    const Item& it = items[i];
    Value& v = values[i];
    if (it.probe)
      ++est.probes_examined;
    else
      ++est.points_examined;
    if (v.e.exact_zero) {
      ++est.infinite_witnesses;
      if (!est.omega_infinite) {
        est.omega_infinite = true;
        OmegaRecord r{it.z, v.e.v, v.norm, CertifiedReal::from_integer(0, base), CertifiedReal(), true, it.probe};
        est.records.push_back(std::move(r));
      }
      continue;
    }
    if (v.e.indeterminate) {
      ++est.indeterminate;
      continue;
    }
    if (v.prod.certainly_less(one)) ++est.below_norm_bound;
    if (it.probe) est.probe_points.push_back({it.z, v.e.v, v.norm, v.Pi, v.ratio, false, true});
    if (v.small || v.nonpositive || est.omega_infinite) continue;
    const bool improves = v.ratio.positive() && (!have_best || mpfr_greater_p(v.ratio.lower().get(), best_hi.get()));
    if (improves) est.records.push_back({it.z, v.e.v, v.norm, v.Pi, v.ratio, false, it.probe});
    if (!have_best || mpfr_greater_p(v.ratio.upper().get(), best_hi.get())) {
      best_hi = v.ratio.upper();
      have_best = true;
    }
  }
  est.omega_hat = CertifiedReal::from_integer(0, base);
  for (auto it = est.records.rbegin(); it != est.records.rend(); ++it)
    if (!it->infinite) {
      est.omega_hat = it->ratio;
      break;
    }
  for (std::size_t i = 1; i < est.records.size(); ++i)
    if (!est.records[i].infinite && !est.records[i - 1].infinite &&
        !est.records[i - 1].ratio.certainly_less(est.records[i].ratio))
      est.trend_increasing = false;
  return est;
}

/// z_1, ..., z_{N-1}: the vectors whose surrogate form values are meaningful.
inline std::vector<IntVector> construction_probes(const ConstructionState& s) {
  std::vector<IntVector> out;
  const long N = last_alpha_index(s);
  for (long k = 1; k < N; ++k) out.push_back(s.at(static_cast<std::size_t>(k)));
  return out;
}

}  // namespace dioph
