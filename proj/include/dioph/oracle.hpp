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
#include <array>
#include <cmath>
#include <type_traits>
#include <cstdint>
#include <limits>
#include <optional>
#include <string>
#include <tuple>
#include <utility>
#include <vector>

#include "dioph/construction.hpp"
#include "dioph/enumeration.hpp"
#include "dioph/linalg.hpp"
#include "dioph/types.hpp"

namespace dioph {

/// L_alpha(z) = <alpha, z>, exact.
inline Rational form_value(const RationalPoint& alpha, const IntVector& z) { return dot(alpha, z); }

inline Rational abs(const Rational& q) { return q < 0 ? Rational(-q) : q; }

/// Integers x minimizing |<alpha_, proj> + x|; two of them at a half-integer
/// tie, larger first.
inline std::vector<Integer> best_last_coordinate(const RationalPoint& alpha_proj, const IntVector& proj) {
  if (alpha_proj.dim() < proj.dim()) throw ArgumentError("dimension mismatch in best_last_coordinate");
  Rational s = 0;
  for (std::size_t i = 0; i < proj.dim(); ++i) s += alpha_proj[i] * proj[i];
  Integer f = floor(s);
  Rational frac = s - Rational(f);
  if (frac == Rational(1, 2)) return {-f, -f - 1};
  if (frac < Rational(1, 2)) return {-f};
  return {-f - 1};
}

struct BestApproxRecord {
  IntVector vector;  // canonical sign
  Rational value;    // |L_alpha(vector)|
  Integer proj_norm_sq;
  bool tie = false;  // another record shares this projected norm
};

struct BestApproxList {
  std::vector<BestApproxRecord> records;
  bool terminated = false;  // some record has value 0
  std::uint64_t points_examined = 0;
};

enum class Definition {
  Strict,     // strict improvement over every strictly shorter projection
  NonStrict,  // only the weak inequality; kept for regression tests
};

/// Common-denominator integer form of the projection part of alpha.
struct IntegerForm {
  std::vector<Integer> a;  // alpha_i * D for i < d - 1
  Integer D;
};

inline IntegerForm integer_form(const RationalPoint& alpha) {
  if (!alpha.on_form_hyperplane()) throw ArgumentError("form point must have last coordinate 1");
  IntegerForm f;
  f.D = 1;
  for (std::size_t i = 0; i + 1 < alpha.dim(); ++i) mpz_lcm(f.D.get_mpz_t(), f.D.get_mpz_t(), alpha[i].get_den().get_mpz_t());
  for (std::size_t i = 0; i + 1 < alpha.dim(); ++i) f.a.push_back(alpha[i].get_num() * (f.D / alpha[i].get_den()));
  return f;
}

namespace detail {

template <class Num>
struct Candidate {
  std::int64_t norm;
  Num num;  // value numerator over the common denominator
  std::vector<std::int64_t> proj;
  Integer last;
};

template <class Num>
bool candidate_less(const Candidate<Num>& x, const Candidate<Num>& y) {
  if (x.norm != y.norm) return x.norm < y.norm;
  if (x.num != y.num) return x.num < y.num;
  if (x.proj != y.proj) return x.proj < y.proj;
  return x.last > y.last;
}

/// Applies the definition to a candidate set sorted by candidate_less.
template <class Num>
std::vector<Candidate<Num>> filter_definition(std::vector<Candidate<Num>> c, Definition def) {
  std::sort(c.begin(), c.end(), candidate_less<Num>);
  std::vector<Candidate<Num>> out;
  bool have_min = false;
  Num run{};
  std::size_t i = 0;
  while (i < c.size()) {
    std::size_t j = i;
    while (j < c.size() && c[j].norm == c[i].norm) ++j;
    const Num& g = c[i].num;  // shell minimum (sorted)
    bool ok = !have_min || (def == Definition::Strict ? g < run : g <= run);
    if (ok) {
      for (std::size_t t = i; t < j && c[t].num == g; ++t) out.push_back(c[t]);
      run = g;
      have_min = true;
      if (def == Definition::Strict && g == 0) break;
    }
    i = j;
  }
  return out;
}

/// Ops for the int64 residue path.
struct FastOps {
  using Num = std::uint64_t;
  const ResidueForm& f;
  std::uint64_t D;
  std::uint64_t value_of(std::uint64_t rho) const { return std::min(rho, D - rho == D ? 0 : D - rho); }
  std::uint64_t start(const std::vector<std::int64_t>& prefix, std::size_t n) const { return f.residue64(prefix, n); }
  std::uint64_t step() const { return f.coef64(f.size() - 1); }
  std::uint64_t add(std::uint64_t r, std::uint64_t s) const { return (r + s) % D; }
  std::uint64_t sub(std::uint64_t r, std::uint64_t s) const { return (r + D - s) % D; }
  bool is_half(std::uint64_t rho) const { return 2 * static_cast<unsigned __int128>(rho) == D; }
  bool below_half(std::uint64_t rho) const { return 2 * static_cast<unsigned __int128>(rho) < D; }
};

/// Ops for arbitrary moduli.
struct BigOps {
  using Num = Integer;
  const ResidueForm& f;
  Integer D;
  Integer value_of(const Integer& rho) const {
    Integer other = D - rho;
    if (rho == 0) return 0;
    return rho < other ? rho : other;
  }
  Integer start(const std::vector<std::int64_t>& prefix, std::size_t n) const {
    Integer r;
    Integer v = f.value(prefix, n);
    mpz_fdiv_r(r.get_mpz_t(), v.get_mpz_t(), D.get_mpz_t());
    return r;
  }
  Integer step() const {
    Integer r;
    mpz_fdiv_r(r.get_mpz_t(), f.coef(f.size() - 1).get_mpz_t(), D.get_mpz_t());
    return r;
  }
  Integer add(const Integer& r, const Integer& s) const {
    Integer t = r + s;
    if (t >= D) t -= D;
    return t;
  }
  Integer sub(const Integer& r, const Integer& s) const {
    Integer t = r - s;
    if (t < 0) t += D;
    return t;
  }
  bool is_half(const Integer& rho) const { return 2 * rho == D; }
  bool below_half(const Integer& rho) const { return 2 * rho < D; }
};

/// Line scan: visits points by increasing |y| and keeps the records of the
/// line under the definition. Returns the number of points visited.
template <class Ops>
std::uint64_t scan_line(const Ops& ops, const ResidueForm& form, const Line& line, Definition def,
                        std::vector<Candidate<typename Ops::Num>>& out) {
  using Num = typename Ops::Num;
  const std::size_t m = line.prefix->size() + 1;
  std::vector<std::int64_t> pt(*line.prefix);
  pt.push_back(0);
  const Num r0 = ops.start(*line.prefix, m - 1);
  const Num c = ops.step();
  Num rp = r0, rm = r0;
  bool have_min = false;
  Num run{};
  std::uint64_t visited = 0;
  auto emit = [&](std::int64_t y, const Num& rho, std::int64_t norm, const Num& val) {
    pt[m - 1] = y;
    Integer s = form.value(pt, m);
    Integer q = floor_div(s, form.modulus());
    if (ops.is_half(rho)) {
      out.push_back({norm, val, pt, -q});
      out.push_back({norm, val, pt, -q - 1});
    } else if (ops.below_half(rho)) {
      out.push_back({norm, val, pt, -q});
    } else {
      out.push_back({norm, val, pt, -q - 1});
    }
  };
  for (std::int64_t y = 0; y <= line.ymax; ++y) {
    if (y > 0) {
      rp = ops.add(rp, c);
      rm = ops.sub(rm, c);
    }
    const std::int64_t norm = line.prefix_norm + y * y;
    const bool has_plus = !(line.positive_only && y == 0);
    const bool has_minus = y > 0 && !line.positive_only;
    if (!has_plus) continue;
    ++visited;
    Num vp = ops.value_of(rp);
    Num g = vp;
    Num vm{};
    if (has_minus) {
      ++visited;
      vm = ops.value_of(rm);
      if (vm < g) g = vm;
    }
    bool ok = !have_min || (def == Definition::Strict ? g < run : g <= run);
    if (!ok) continue;
    if (vp == g) emit(y, rp, norm, vp);
    if (has_minus && vm == g) emit(-y, rm, norm, vm);
    run = g;
    have_min = true;
    if (def == Definition::Strict && g == 0) break;
  }
  return visited;
}

template <class Num>
BestApproxList finish(std::vector<Candidate<Num>> cands, const Integer& D, std::uint64_t visited,
                      Definition def) {
  auto best = filter_definition(std::move(cands), def);
  BestApproxList list;
  list.points_examined = visited;
  for (auto& c : best) {
    std::vector<Integer> coords;
    for (auto v : c.proj) coords.emplace_back(static_cast<long>(v));
    coords.push_back(c.last);
    BestApproxRecord r;
    r.vector = IntVector(std::move(coords));
    r.value = Rational(Integer(c.num), D);
    r.value.canonicalize();
    r.proj_norm_sq = Integer(static_cast<long>(c.norm));
    if (r.value == 0) list.terminated = true;
    list.records.push_back(std::move(r));
  }
  for (std::size_t i = 0; i < list.records.size(); ++i) {
    bool left = i > 0 && list.records[i - 1].proj_norm_sq == list.records[i].proj_norm_sq;
    bool right = i + 1 < list.records.size() && list.records[i + 1].proj_norm_sq == list.records[i].proj_norm_sq;
    list.records[i].tie = left || right;
  }
  return list;
}

template <class Ops>
BestApproxList enumerate_best(const Ops& ops, const ResidueForm& form, int m, const Integer& X_sq,
                              const EnumerationConfig& cfg, Definition def) {
  using Num = typename Ops::Num;
  struct Slab {
    std::vector<Candidate<Num>> cands;
    std::uint64_t visited = 0;
  };
  auto slabs = run_slabs<Slab>(m, X_sq, cfg, [&](std::int64_t x1, Slab& out) {
    std::vector<Candidate<Num>> local;
    for_each_line(m, X_sq, x1, [&](const Line& line) {
      out.visited += scan_line(ops, form, line, def, local);
    });
    out.cands = filter_definition(std::move(local), def);
  });
  std::vector<Candidate<Num>> all;
  std::uint64_t visited = 0;
  for (auto& s : slabs) {
    visited += s.visited;
    for (auto& c : s.cands) all.push_back(std::move(c));
  }
  return finish(std::move(all), form.modulus(), visited, def);
}

}  // namespace detail

/// Best approximation vectors of L_alpha with 0 < |proj|^2 <= X_sq, by
/// exhaustive enumeration of the canonical half ball.
inline BestApproxList best_approximations(const RationalPoint& alpha, const Integer& X_sq,
                                          const EnumerationConfig& cfg = {},
                                          Definition def = Definition::Strict) {
  const int d = static_cast<int>(alpha.dim());
  if (d < 2) throw ArgumentError("form needs d >= 2");
  if (X_sq < 1) throw ArgumentError("norm bound must be at least 1");
  check_budget(d - 1, X_sq, cfg);
  IntegerForm f = integer_form(alpha);
  ResidueForm form(f.a, f.D);
  if (form.fast()) {
    detail::FastOps ops{form, form.modulus64()};
    return detail::enumerate_best(ops, form, d - 1, X_sq, cfg, def);
  }
  detail::BigOps ops{form, form.modulus()};
  return detail::enumerate_best(ops, form, d - 1, X_sq, cfg, def);
}

/// One enumerated projection together with its nearest form values.
class PointView {
 public:
  PointView(const std::vector<std::int64_t>& pt, std::int64_t norm, const ResidueForm& form,
            std::uint64_t rho64, const Integer* rho_big)
      : pt_(&pt), norm_(norm), form_(&form), rho64_(rho64), rho_big_(rho_big) {}

  const std::vector<std::int64_t>& proj() const { return *pt_; }
  std::int64_t norm() const { return norm_; }
  const Integer& denominator() const { return form_->modulus(); }

  /// rho = <a, proj> mod D, so that the nearest values are rho/D and 1 - rho/D.
  Integer rho() const { return rho_big_ ? *rho_big_ : Integer(static_cast<unsigned long>(rho64_)); }

  /// Nearest |L| over the free coordinate, as a double.
  double approx_value() const {
    if (!rho_big_) {
      std::uint64_t D = form_->modulus64();
      std::uint64_t v = std::min(rho64_, D - rho64_);
      return static_cast<double>(static_cast<long double>(v) / static_cast<long double>(D));
    }
    Integer v = std::min(*rho_big_, Integer(form_->modulus() - *rho_big_));
    long e1 = 0, e2 = 0;
    double m1 = mpz_get_d_2exp(&e1, v.get_mpz_t());
    double m2 = mpz_get_d_2exp(&e2, form_->modulus().get_mpz_t());
    if (v == 0) return 0.0;
    return std::ldexp(m1 / m2, static_cast<int>(e1 - e2));
  }

  /// The two nearest choices of the last coordinate, nearest first, with
  /// their value numerators over D.
  std::array<std::pair<Integer, Integer>, 2> nearest() const {
    Integer s = form_->value(*pt_, pt_->size());
    const Integer& D = form_->modulus();
    Integer q = floor_div(s, D);
    Integer r = s - q * D;
    Integer up = D - r;
    if (r <= up) return {{{-q, r}, {-q - 1, up}}};
    return {{{-q - 1, up}, {-q, r}}};
  }

  IntVector full(const Integer& last) const {
    std::vector<Integer> c;
    for (auto v : *pt_) c.emplace_back(static_cast<long>(v));
    c.push_back(last);
    return IntVector(std::move(c));
  }

 private:
  const std::vector<std::int64_t>* pt_;
  std::int64_t norm_;
  const ResidueForm* form_;
  std::uint64_t rho64_;
  const Integer* rho_big_;
};

namespace detail {

template <class Ops, class Fn>
std::uint64_t visit_line(const Ops& ops, const ResidueForm& form, const Line& line, Fn& fn) {
  using Num = typename Ops::Num;
  const std::size_t m = line.prefix->size() + 1;
  std::vector<std::int64_t> pt(*line.prefix);
  pt.push_back(0);
  const Num r0 = ops.start(*line.prefix, m - 1);
  const Num c = ops.step();
  Num rp = r0, rm = r0;
  std::uint64_t visited = 0;
  auto call = [&](std::int64_t y, const Num& rho, std::int64_t norm) {
    pt[m - 1] = y;
    if constexpr (std::is_same_v<Num, Integer>) {
      fn(PointView(pt, norm, form, 0, &rho));
    } else {
      fn(PointView(pt, norm, form, rho, nullptr));
    }
  };
  for (std::int64_t y = 0; y <= line.ymax; ++y) {
    if (y > 0) {
      rp = ops.add(rp, c);
      rm = ops.sub(rm, c);
    }
    const std::int64_t norm = line.prefix_norm + y * y;
    if (line.positive_only && y == 0) continue;
    ++visited;
    call(y, rp, norm);
    if (y > 0 && !line.positive_only) {
      ++visited;
      call(-y, rm, norm);
    }
  }
  return visited;
}

}  // namespace detail

/// Visits every canonical projection 0 < |x|^2 <= X_sq of Z^{d-1}. `fn(point,
/// slab)` runs concurrently across slabs; the per-slab results come back in
/// slab order.
template <class Slab, class Fn>
std::vector<Slab> visit_points(const RationalPoint& alpha, const Integer& X_sq, const EnumerationConfig& cfg,
                               Fn&& fn) {
  const int m = static_cast<int>(alpha.dim()) - 1;
  if (m < 1) throw ArgumentError("form needs d >= 2");
  check_budget(m, X_sq, cfg);
  IntegerForm f = integer_form(alpha);
  ResidueForm form(f.a, f.D);
  auto run = [&](const auto& ops) {
    return run_slabs<Slab>(m, X_sq, cfg, [&](std::int64_t x1, Slab& out) {
      auto bound = [&](const PointView& p) { fn(p, out); };
      for_each_line(m, X_sq, x1, [&](const Line& line) { detail::visit_line(ops, form, line, bound); });
    });
  };
  if (form.fast()) return run(detail::FastOps{form, form.modulus64()});
  return run(detail::BigOps{form, form.modulus()});
}

struct WindowMismatch {
  std::size_t position = 0;
  std::optional<IntVector> expected;
  std::optional<IntVector> found;
  std::optional<Rational> found_value;
  std::optional<Rational> expected_value;
};

struct WindowReport {
  bool match = false;
  long K = 0;
  long M = 0;
  long N = 0;  // index of the surrogate alpha_N
  RationalPoint alpha_hat;
  Integer X_sq;
  Integer lower_norm;
  std::vector<BestApproxRecord> records;  // oracle records in [lower_norm, X_sq)
  std::vector<IntVector> expected;        // canonical z_K, ..., z_M
  std::optional<WindowMismatch> mismatch;
  std::uint64_t points_examined = 0;
  std::vector<BestApproxRecord> below_window;  // records under |z_K|^2, listed without judgment
};

/// Checks that the best approximation vectors of alpha_N, N = M + d, with
/// projected norms in [|z_K|^2, |z_{M+1}|^2) are exactly z_K, ..., z_M.
inline WindowReport verify_window(const ConstructionState& s, long K, long M, const EnumerationConfig& cfg = {}) {
  const long d = s.d();
  if (K < 1 || M < K) throw ArgumentError("verify_window needs 1 <= K <= M");
  const long N = M + d;
  if (N > last_alpha_index(s))
    throw ArgumentError("verify_window needs at least M + 2d - 1 vectors");
  WindowReport r;
  r.K = K;
  r.M = M;
  r.N = N;
  r.alpha_hat = alpha_ball(s, N).alpha;
  r.X_sq = s.proj_norm_sq(static_cast<std::size_t>(M + 1));
  r.lower_norm = s.proj_norm_sq(static_cast<std::size_t>(K));
  BestApproxList list = best_approximations(r.alpha_hat, r.X_sq, cfg);
  r.points_examined = list.points_examined;
  for (auto& rec : list.records) {
    if (rec.proj_norm_sq < r.lower_norm)
      r.below_window.push_back(rec);
    else if (rec.proj_norm_sq < r.X_sq)
      r.records.push_back(rec);
  }
  for (long i = K; i <= M; ++i) r.expected.push_back(canonical_sign(s.at(static_cast<std::size_t>(i))));
  const std::size_t n = std::max(r.records.size(), r.expected.size());
  for (std::size_t i = 0; i < n; ++i) {
    bool has_e = i < r.expected.size(), has_f = i < r.records.size();
    if (has_e && has_f && r.expected[i] == r.records[i].vector) continue;
    WindowMismatch mm;
    mm.position = i;
    if (has_e) {
      mm.expected = r.expected[i];
      mm.expected_value = abs(form_value(r.alpha_hat, r.expected[i]));
    }
    if (has_f) {
      mm.found = r.records[i].vector;
      mm.found_value = r.records[i].value;
    }
    r.mismatch = mm;
    r.match = false;
    return r;
  }
  r.match = true;
  return r;
}

}  // namespace dioph
