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
#include <atomic>
#include <cmath>
#include <cstdint>
#include <cstdlib>
#include <exception>
#include <mutex>
#include <numbers>
#include <string>
#include <thread>
#include <vector>

#include "dioph/types.hpp"

namespace dioph {

inline constexpr const char* kWorkersEnv = "DIOPH_WORKERS";

/// Worker count from DIOPH_WORKERS, else the hardware concurrency.
inline unsigned default_workers() {
  if (const char* v = std::getenv(kWorkersEnv)) {
    char* end = nullptr;
    long n = std::strtol(v, &end, 10);
    if (end == v || *end != '\0' || n < 1 || n > 1024)
      throw ArgumentError(std::string(kWorkersEnv) + " must be an integer in [1, 1024]");
    return static_cast<unsigned>(n);
  }
  unsigned hc = std::thread::hardware_concurrency();
  return hc == 0 ? 1 : hc;
}

struct EnumerationConfig {
  unsigned workers = 0;                 // 0 selects default_workers()
  std::uint64_t budget = 250'000'000;  // points of the half ball

  unsigned resolved_workers() const { return workers == 0 ? default_workers() : workers; }
};

/// Volume estimate of the canonical half of the ball |x|^2 <= X in Z^m.
inline double half_ball_points(int m, double X) {
  double r = std::sqrt(X);
  double v = std::pow(std::numbers::pi, m / 2.0) / std::tgamma(m / 2.0 + 1.0) * std::pow(r, m);
  // Boundary layer for small radii.
  return v / 2.0 + std::pow(2.0 * r + 1.0, m - 1);
}

inline std::int64_t small_bound(const Integer& X_sq) {
  if (X_sq < 0) throw ArgumentError("negative norm bound");
  if (!X_sq.fits_slong_p() || X_sq > Integer("4000000000000000000"))
    throw BudgetExceeded("norm bound exceeds the enumeration range");
  return X_sq.get_si();
}

inline void check_budget(int m, const Integer& X_sq, const EnumerationConfig& cfg) {
  double est = half_ball_points(m, static_cast<double>(small_bound(X_sq)));
  if (est > static_cast<double>(cfg.budget))
    throw BudgetExceeded("enumeration of about " + std::to_string(static_cast<long long>(est)) +
                         " points exceeds the budget of " + std::to_string(cfg.budget));
}

inline std::int64_t isqrt64(std::int64_t x) {
  if (x <= 0) return 0;
  auto r = static_cast<std::int64_t>(std::sqrt(static_cast<double>(x)));
  while (r * r > x) --r;
  while ((r + 1) * (r + 1) <= x) ++r;
  return r;
}

/// A line of the canonical half ball: all points (prefix, y) of Z^m with
/// |prefix|^2 + y^2 <= X and y in [-ymax, ymax], restricted to y > 0 when the
/// prefix is zero (first nonzero coordinate positive).
struct Line {
  const std::vector<std::int64_t>* prefix;  // m - 1 coordinates
  std::int64_t prefix_norm;
  std::int64_t ymax;
  bool positive_only;
};

namespace detail {

template <class OnLine>
void lines_of_slab(int m, std::int64_t X, std::int64_t x1, OnLine&& on_line) {
  std::vector<std::int64_t> prefix(static_cast<std::size_t>(std::max(m - 1, 0)));
  if (m == 1) {
    // The whole ball is a single line with positive coordinate.
    on_line(Line{&prefix, 0, isqrt64(X), true});
    return;
  }
  prefix[0] = x1;
  std::int64_t base = x1 * x1;
  if (base > X) return;
  // Enumerate prefix[1..m-2] recursively; each prefix contributes one line.
  auto rec = [&](auto&& self, std::size_t i, std::int64_t norm, bool all_zero) -> void {
    if (i + 1 == static_cast<std::size_t>(m)) {
      on_line(Line{&prefix, norm, isqrt64(X - norm), all_zero});
      return;
    }
    std::int64_t r = isqrt64(X - norm);
    // Once all earlier coordinates are zero the current one must be >= 0.
    std::int64_t lo = all_zero ? 0 : -r;
    for (std::int64_t v = lo; v <= r; ++v) {
      prefix[i] = v;
      self(self, i + 1, norm + v * v, all_zero && v == 0);
    }
    prefix[i] = 0;
  };
  rec(rec, 1, base, x1 == 0);
}

}  // namespace detail

/// Runs `slab_fn(x1, result)` for every slab x1 = 0..isqrt(X) (one slab when
/// m = 1) on a pool of workers and returns the per-slab results in slab
/// order, so merges downstream are deterministic.
template <class Result, class SlabFn>
std::vector<Result> run_slabs(int m, const Integer& X_sq, const EnumerationConfig& cfg, SlabFn&& slab_fn) {
  const std::int64_t X = small_bound(X_sq);
  const std::int64_t slabs = (m == 1) ? 1 : isqrt64(X) + 1;
  std::vector<Result> results(static_cast<std::size_t>(slabs));
  const unsigned workers = std::max(1u, std::min<unsigned>(cfg.resolved_workers(), static_cast<unsigned>(slabs)));
  std::atomic<std::int64_t> next{0};
  std::exception_ptr error;
  std::mutex error_mutex;
  auto work = [&] {
    for (;;) {
      std::int64_t s = next.fetch_add(1);
      if (s >= slabs) return;
      try {
        slab_fn(s, results[static_cast<std::size_t>(s)]);
      } catch (...) {
        std::lock_guard<std::mutex> lock(error_mutex);
        if (!error) error = std::current_exception();
        next.store(slabs);
        return;
      }
    }
  };
  if (workers == 1) {
    work();
  } else {
    std::vector<std::thread> pool;
    for (unsigned i = 0; i < workers; ++i) pool.emplace_back(work);
    for (auto& t : pool) t.join();
  }
  if (error) std::rethrow_exception(error);
  return results;
}

/// Convenience: visit every line of slab x1.
template <class OnLine>
void for_each_line(int m, const Integer& X_sq, std::int64_t x1, OnLine&& on_line) {
  detail::lines_of_slab(m, small_bound(X_sq), x1, std::forward<OnLine>(on_line));
}

/// Exact residues of <a, x> mod D for integer a and x, with an int64 fast
/// path when D < 2^62.
class ResidueForm {
 public:
  ResidueForm(std::vector<Integer> a, Integer D) : a_(std::move(a)), D_(std::move(D)) {
    if (D_ <= 0) throw ArgumentError("residue modulus must be positive");
    fast_ = D_ < (Integer(1) << 62);
    if (fast_) {
      d64_ = static_cast<std::uint64_t>(D_.get_ui());
      if (sizeof(unsigned long) < 8) fast_ = false;
      for (auto& c : a_) {
        Integer r;
        mpz_fdiv_r(r.get_mpz_t(), c.get_mpz_t(), D_.get_mpz_t());
        a64_.push_back(static_cast<std::uint64_t>(r.get_ui()));
      }
    }
  }
  bool fast() const { return fast_; }
  const Integer& modulus() const { return D_; }
  std::uint64_t modulus64() const { return d64_; }
  std::uint64_t coef64(std::size_t i) const { return a64_[i]; }
  const Integer& coef(std::size_t i) const { return a_[i]; }
  std::size_t size() const { return a_.size(); }

  /// <a[0..n), x> mod D for the first n coefficients.
  std::uint64_t residue64(const std::vector<std::int64_t>& x, std::size_t n) const {
    unsigned __int128 acc = 0;
    for (std::size_t i = 0; i < n; ++i) {
      std::int64_t v = x[i];
      std::uint64_t vm = v >= 0 ? static_cast<std::uint64_t>(v) % d64_
                                : (d64_ - static_cast<std::uint64_t>(-(v + 1)) % d64_ - 1) % d64_;
      acc = (acc + static_cast<unsigned __int128>(vm) * a64_[i]) % d64_;
    }
    return static_cast<std::uint64_t>(acc);
  }
  /// Exact <a[0..n), x> (not reduced).
  Integer value(const std::vector<std::int64_t>& x, std::size_t n) const {
    Integer acc = 0;
    for (std::size_t i = 0; i < n; ++i) acc += a_[i] * Integer(static_cast<long>(x[i]));
    return acc;
  }

 private:
  std::vector<Integer> a_;
  Integer D_;
  bool fast_ = false;
  std::uint64_t d64_ = 0;
  std::vector<std::uint64_t> a64_;
};

}  // namespace dioph
