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

#include <map>
#include <span>
#include <utility>
#include <vector>

#include "dioph/types.hpp"

namespace dioph {

using IntMatrix = std::vector<std::vector<Integer>>;
using RationalVector = std::vector<Rational>;

/// Fraction-free Gaussian elimination. Every division is exact.
inline Integer bareiss_determinant(IntMatrix m) {
  const std::size_t n = m.size();
  if (n == 0) return 1;
  for (const auto& row : m)
    if (row.size() != n) throw ArgumentError("determinant of a non-square matrix");
  int sign = 1;
  Integer prev = 1;
  for (std::size_t k = 0; k + 1 < n; ++k) {
    if (m[k][k] == 0) {
      std::size_t swap = k + 1;
      while (swap < n && m[swap][k] == 0) ++swap;
      if (swap == n) return 0;
      std::swap(m[k], m[swap]);
      sign = -sign;
    }
    for (std::size_t i = k + 1; i < n; ++i) {
      for (std::size_t j = k + 1; j < n; ++j) {
        Integer t = m[i][j] * m[k][k] - m[i][k] * m[k][j];
        mpz_divexact(m[i][j].get_mpz_t(), t.get_mpz_t(), prev.get_mpz_t());
      }
    }
    prev = m[k][k];
  }
  return sign * m[n - 1][n - 1];
}

/// Determinant of the Gram matrix; the empty family has Gram determinant 1.
inline Integer gram_determinant(std::span<const IntVector> vs) {
  if (vs.empty()) return 1;
  const std::size_t dim = vs.front().dim();
  for (const auto& v : vs)
    if (v.dim() != dim) throw ArgumentError("dimension mismatch in Gram determinant");
  if (vs.size() > dim) return 0;
  IntMatrix g(vs.size(), std::vector<Integer>(vs.size()));
  for (std::size_t i = 0; i < vs.size(); ++i)
    for (std::size_t j = i; j < vs.size(); ++j) g[i][j] = g[j][i] = dot(vs[i], vs[j]);
  return bareiss_determinant(std::move(g));
}

inline Integer gram_determinant(const std::vector<IntVector>& vs) {
  return gram_determinant(std::span<const IntVector>(vs));
}

/// Signed determinant with the vectors as columns.
inline Integer full_determinant(std::span<const IntVector> vs) {
  const std::size_t n = vs.size();
  IntMatrix m(n);
  for (std::size_t i = 0; i < n; ++i) {
    if (vs[i].dim() != n) throw ArgumentError("full determinant needs n vectors of dimension n");
    m[i] = vs[i].coords();  // transpose leaves the determinant unchanged
  }
  return bareiss_determinant(std::move(m));
}

inline Integer full_determinant(const std::vector<IntVector>& vs) {
  return full_determinant(std::span<const IntVector>(vs));
}

inline std::vector<IntVector> projections(std::span<const IntVector> vs) {
  std::vector<IntVector> out;
  out.reserve(vs.size());
  for (const auto& v : vs) out.push_back(v.projection());
  return out;
}

inline Rational dot(const RationalVector& a, const IntVector& b) {
  Rational s = 0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

inline Rational dot(const RationalVector& a, const RationalVector& b) {
  Rational s = 0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

/// Orthogonal frame with b[i] matching input i. Processing runs from the last
/// input to the first, so b[i] is orthogonal to inputs i+1, ..., n-1 and
/// <b[i], v[i]> = |b[i]|^2.
struct GramSchmidtFrame {
  std::vector<RationalVector> b;
  std::vector<Rational> norm_sq;
};

inline GramSchmidtFrame gram_schmidt_reverse(std::span<const IntVector> vs) {
  const std::size_t n = vs.size();
  if (n == 0) return {};
  const std::size_t dim = vs.front().dim();
  GramSchmidtFrame f;
  f.b.resize(n);
  f.norm_sq.resize(n);
  for (std::size_t ii = n; ii-- > 0;) {
    if (vs[ii].dim() != dim) throw ArgumentError("dimension mismatch in Gram-Schmidt");
    RationalVector b(dim);
    for (std::size_t c = 0; c < dim; ++c) b[c] = vs[ii][c];
    for (std::size_t j = ii + 1; j < n; ++j) {
      Rational coef = dot(f.b[j], vs[ii]) / f.norm_sq[j];
      if (coef == 0) continue;
      for (std::size_t c = 0; c < dim; ++c) b[c] -= coef * f.b[j][c];
    }
    Rational nsq = dot(b, b);
    if (nsq == 0) throw DegeneracyError("Gram-Schmidt input is linearly dependent");
    f.b[ii] = std::move(b);
    f.norm_sq[ii] = std::move(nsq);
  }
  return f;
}

inline GramSchmidtFrame gram_schmidt_reverse(const std::vector<IntVector>& vs) {
  return gram_schmidt_reverse(std::span<const IntVector>(vs));
}

/// Point of the hyperplane x_d = 1 orthogonal to d-1 vectors of Z^d, together
/// with the projected determinant and the integer vector alpha * det.
struct AlphaSolution {
  RationalPoint alpha;
  Integer det;
  IntVector scaled;
};

inline AlphaSolution solve_alpha_scaled(std::span<const IntVector> vs) {
  if (vs.empty()) throw ArgumentError("solve_alpha needs at least one vector");
  const std::size_t d = vs.front().dim();
  if (vs.size() + 1 != d) throw ArgumentError("solve_alpha needs d-1 vectors of dimension d");
  for (const auto& v : vs)
    if (v.dim() != d) throw ArgumentError("dimension mismatch in solve_alpha");
  const std::size_t n = d - 1;
  IntMatrix a(n, std::vector<Integer>(n));
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) a[i][j] = vs[i][j];
  Integer det = bareiss_determinant(a);
  if (det == 0) throw DegeneracyError("projected vectors are dependent; alpha undefined");
  std::vector<Integer> scaled(d);
  for (std::size_t j = 0; j < n; ++j) {
    IntMatrix aj = a;
    for (std::size_t i = 0; i < n; ++i) aj[i][j] = -vs[i][n];
    scaled[j] = bareiss_determinant(std::move(aj));
  }
  scaled[n] = det;
  std::vector<Rational> coords(d);
  for (std::size_t j = 0; j < d; ++j) {
    coords[j] = Rational(scaled[j], det);
    coords[j].canonicalize();
  }
  return {RationalPoint(std::move(coords)), det, IntVector(std::move(scaled))};
}

inline RationalPoint solve_alpha(std::span<const IntVector> vs) { return solve_alpha_scaled(vs).alpha; }

inline RationalPoint solve_alpha(const std::vector<IntVector>& vs) {
  return solve_alpha(std::span<const IntVector>(vs));
}

/// Exact invariants of a window z_k, ..., z_{k+d-1}.
struct WindowQuantities {
  Rational B_sq;                        // |z_{k+1}|^2 / |z_k|^2 (projections)
  std::map<int, Rational> D_sq;         // l -> gram(l leading projections) / |z_k|^{2l}
  Rational R_sq;                        // 1 / (4 |z_{k+1}|^2 gram_dets[d-1])
  std::map<int, Integer> gram_dets;     // l -> gram(l leading projections)
  Integer full_det;
};

inline WindowQuantities window_quantities(std::span<const IntVector> vs) {
  const std::size_t d = vs.size();
  if (d < 2) throw ArgumentError("window needs at least two vectors");
  for (const auto& v : vs)
    if (v.dim() != d) throw ArgumentError("window needs d vectors of dimension d");
  std::vector<IntVector> proj = projections(vs);
  WindowQuantities q;
  Integer n0 = norm_sq(proj[0]);
  Integer n1 = norm_sq(proj[1]);
  if (n0 == 0) throw DegeneracyError("zero projection in window");
  q.B_sq = Rational(n1, n0);
  q.B_sq.canonicalize();
  Integer n0_pow = 1;
  for (std::size_t l = 1; l < d; ++l) {
    Integer g = gram_determinant(std::span<const IntVector>(proj.data(), l));
    n0_pow *= n0;
    q.gram_dets[static_cast<int>(l)] = g;
    Rational dsq(g, n0_pow);
    dsq.canonicalize();
    q.D_sq[static_cast<int>(l)] = dsq;
  }
  const Integer& top = q.gram_dets[static_cast<int>(d - 1)];
  if (top == 0) throw DegeneracyError("projected window vectors are dependent");
  q.R_sq = Rational(1, 4 * n1 * top);
  q.R_sq.canonicalize();
  q.full_det = full_determinant(vs);
  return q;
}

inline WindowQuantities window_quantities(const std::vector<IntVector>& vs) {
  return window_quantities(std::span<const IntVector>(vs));
}

}  // namespace dioph
