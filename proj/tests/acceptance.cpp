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

// End-to-end acceptance checks. One PASS/FAIL line per criterion; the exit
// status is the number of failed criteria.

#include <chrono>
#include <cstdio>
#include <functional>
#include <map>
#include <random>
#include <sstream>
#include <string>

#include "dioph/cf2.hpp"
#include "dioph/cli.hpp"
#include "dioph/diagnostics.hpp"
#include "dioph/spectra.hpp"

namespace {

using namespace dioph;

struct Outcome {
  bool pass = false;
  std::string detail;
};

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

std::string fmt(double x, int digits = 4) {
  std::ostringstream os;
  os.precision(digits);
  os << x;
  return os.str();
}

struct Run {
  int d;
  Rational beta;
  long steps;
  ConstructionState state;
  double seconds;
};

// Constructions shared by several criteria.
std::map<std::string, Run>& runs() {
  static std::map<std::string, Run> r;
  return r;
}

const Run& run(int d, const Rational& beta, long steps) {
  std::string key = std::to_string(d) + ":" + beta.get_str() + ":" + std::to_string(steps);
  auto it = runs().find(key);
  if (it != runs().end()) return it->second;
  auto t0 = std::chrono::steady_clock::now();
  ConstructionState s = construct(d, beta, steps);
  Run r{d, beta, steps, std::move(s), seconds_since(t0)};
  return runs().emplace(key, std::move(r)).first->second;
}

const std::vector<std::tuple<int, Rational, long>>& validity_runs() {
  static const std::vector<std::tuple<int, Rational, long>> v{
      {3, Rational(1), 12}, {3, Rational(3, 2), 12}, {4, Rational(1), 12}};
  return v;
}

std::vector<IntVector> random_unimodular(std::mt19937_64& rng) {
  std::vector<std::vector<long>> m{{1, 0, 0}, {0, 1, 0}, {0, 0, 1}};
  std::uniform_int_distribution<int> idx(0, 2);
  std::uniform_int_distribution<long> mult(-4, 4);
  for (int step = 0; step < 14; ++step) {
    int i = idx(rng), j = idx(rng);
    if (i == j) continue;
    long c = mult(rng);
    for (int col = 0; col < 3; ++col) m[i][col] += c * m[j][col];
  }
  std::vector<IntVector> w;
  for (int col = 0; col < 3; ++col) w.push_back(IntVector{m[0][col], m[1][col], m[2][col]});
  return w;
}

Outcome exact_identity() {
  auto t0 = std::chrono::steady_clock::now();
  const ConstructionState& s = run(3, Rational(1), 15).state;
  long windows = 0, failures = 0;
  for (long k = 1; k + s.d() <= static_cast<long>(s.size()); ++k, ++windows)
    if (distance_alphas_check(s, k).verdict != Verdict::ExactEquality) ++failures;
  std::mt19937_64 rng(20261014);
  long random_windows = 0;
  while (random_windows < 100) {
    std::vector<IntVector> w = random_unimodular(rng);
    if (abs(full_determinant(w)) != 1) continue;
    try {
      if (distance_alphas_identity(w).verdict != Verdict::ExactEquality) ++failures;
      ++random_windows;
    } catch (const DegeneracyError&) {
    }
  }
  double t = seconds_since(t0);
  return {failures == 0 && windows >= 15 && t < 60.0,
          std::to_string(windows) + " run windows + " + std::to_string(random_windows) + " random windows, " +
              std::to_string(failures) + " failures, " + fmt(t) + " s"};
}

Outcome construction_validity() {
  bool ok = true;
  std::string detail;
  for (const auto& [d, beta, steps] : validity_runs()) {
    const Run& r = run(d, beta, steps);
    Threshold t = hypothesis_threshold(r.state);
    bool nu = true;
    for (const auto& st : r.state.diagnostics()) nu = nu && st.nu_in_range;
    bool this_ok = r.state.steps() == steps && t.basic_flags_everywhere && t.found && t.K <= 4 && nu;
    ok = ok && this_ok;
    detail += "(" + std::to_string(d) + "," + beta.get_str() + ") " + std::to_string(steps) + " steps K=" +
              std::to_string(t.K) + " " + fmt(r.seconds) + " s" + (this_ok ? "" : " [failed]") + "; ";
  }
  return {ok, detail};
}

Outcome oracle_equivalence() {
  auto t0 = std::chrono::steady_clock::now();
  const ConstructionState& s = run(3, Rational(1, 12), 12).state;
  EnumerationConfig cfg;
  auto [K, M] = cli::select_window(s, cfg);
  WindowReport r = verify_window(s, K, M, cfg);
  double t = seconds_since(t0);
  long covered = M - K + 1;
  long threshold = hypothesis_threshold(s).K;
  bool ok = r.match && r.X_sq <= 100000000 && covered >= 5 && K > threshold && t <= 1800.0;
  return {ok, "beta=1/12 K=" + std::to_string(K) + " M=" + std::to_string(M) + " (threshold " +
                  std::to_string(threshold) + "), " + std::to_string(covered) + " vectors, |z|^2 < " +
                  r.X_sq.get_str() + ", " + std::to_string(r.points_examined) + " points, " +
                  (r.match ? "match" : "MISMATCH") + ", " + fmt(t) + " s with " +
                  std::to_string(cfg.resolved_workers()) + " worker(s)"};
}

Outcome decay_exponent() {
  struct Case {
    Rational beta;
    long steps;
    double lo, hi;
  };
  bool ok = true;
  std::string detail;
  for (const Case& c : {Case{Rational(1), 15, -4.4, -3.6}, Case{Rational(3, 2), 12, -7.43, -6.08}}) {
    const ConstructionState& s = run(3, c.beta, c.steps).state;
    DecaySeries ds = decay_series(s, surrogate_alpha(s));
    bool hits = ds.slope.lo_double() <= c.hi && ds.slope.hi_double() >= c.lo;
    bool this_ok = hits && ds.entries.size() >= 10;
    ok = ok && this_ok;
    detail += "beta=" + c.beta.get_str() + " slope " + fmt(ds.slope_mid, 6) + " in [" + fmt(ds.slope.lo_double(), 6) +
              ", " + fmt(ds.slope.hi_double(), 6) + "] target " + fmt(ds.target.get_d()) + ", " +
              std::to_string(ds.entries.size()) + " points; ";
  }
  return {ok, detail};
}

Outcome separation() {
  const ConstructionState& s = run(3, Rational(1), 15).state;
  SeparationReport r = separation_check(s, surrogate_alpha(s), Integer(1000000));
  bool ok = r.positive && r.c_sep.positive() && r.factor_c.positive() && r.nonmultiples > 0;
  return {ok, "|z|^2 <= 10^6: " + std::to_string(r.nonmultiples) + " non-multiples, c = " +
                  fmt(r.c_sep.mid_double()) + ", factor over best products " + fmt(r.factor_c.mid_double())};
}

Outcome directions() {
  bool ok = true;
  std::string detail;
  for (const auto& [d, beta, steps] : validity_runs()) {
    const ConstructionState& s = run(d, beta, steps).state;
    DirectionReport r = asymptotic_directions(s, hypothesis_threshold(s).K);
    bool this_ok = r.pair_count == 2 && r.disjoint && r.cross_cosine_gap <= 0.05;
    ok = ok && this_ok;
    detail += "(" + std::to_string(d) + "," + beta.get_str() + ") pairs=" + std::to_string(r.pair_count) +
              " cos=" + fmt(r.cross_cosine.mid_double(), 6) + "; ";
  }
  return {ok, detail};
}

Outcome nested_balls() {
  long checked = 0, failures = 0;
  for (const auto& [d, beta, steps] : validity_runs()) {
    const ConstructionState& s = run(d, beta, steps).state;
    for (long k = std::max(1L, hypothesis_threshold(s).K); k + 1 <= last_alpha_index(s); ++k, ++checked) {
      NestedBallsReport r = nested_balls_check(s, k);
      if (!(r.radius_shrinks && r.contained && r.status == CheckStatus::Holds)) ++failures;
    }
  }
  return {failures == 0 && checked > 0, std::to_string(checked) + " balls, " + std::to_string(failures) + " failures"};
}

Outcome cf2_theory() {
  bool ok = true;
  std::string detail;
  for (Rational beta : {Rational(0), Rational(1, 2), Rational(1)}) {
    CF2Report r = cf2_verify(cf2_build(beta, 25), 10000);
    bool this_ok = std::fabs(r.mu_hat - (beta.get_d() + 2)) <= 0.1 && r.legendre.nonconvergent_violations == 0 &&
                   r.determinant_ok;
    ok = ok && this_ok;
    detail += "beta=" + beta.get_str() + " mu=" + fmt(r.mu_hat, 6) + " nonconvergent violations " +
              std::to_string(r.legendre.nonconvergent_violations) + "; ";
  }
  return {ok, detail};
}

Outcome assembled_exponent() {
  auto t0 = std::chrono::steady_clock::now();
  const ConstructionState& s = run(3, Rational(3, 2), 12).state;
  FieldSpec field = builtin_field(3);
  auto comps = companion_forms(field);
  comps.pop_back();
  DirectionReport dr = asymptotic_directions(s, hypothesis_threshold(s).K);
  LatticeSpec spec = assemble_lattice(s, comps, &dr, field.name);
  OmegaEstimate e = omega_estimate(spec, 1000000, construction_probes(s));
  double last = e.records.empty() ? 0.0 : e.records.back().ratio.mid_double();
  bool ok = !e.records.empty() && e.trend_increasing && last >= 1.5 && last <= 3.0 && !e.caveat.empty() &&
            spec.target && *spec.target == Rational(9, 4);
  std::string ratios;
  for (const auto& r : e.records) ratios += fmt(r.ratio.mid_double(), 3) + " ";
  return {ok, "records " + ratios + "(target 9/4, last " + fmt(last) + "), nondegeneracy " +
                  to_string(spec.nondegeneracy) + ", " + fmt(seconds_since(t0)) + " s; report only: " + e.caveat};
}

Outcome norm_form() {
  LatticeSpec spec = norm_form_lattice(builtin_field(3));
  OmegaEstimate e = omega_estimate(spec, 1000000);
  bool ok = !e.partial && e.below_norm_bound == 0 && e.points_examined == 1000000 && e.omega_hat.hi_double() <= 0.1;
  return {ok, std::to_string(e.points_examined) + " points, " + std::to_string(e.below_norm_bound) +
                  " below the norm bound, omega_hat " + fmt(e.omega_hat.mid_double()) + ", " +
                  std::to_string(e.records.size()) + " records"};
}

}  // namespace

int main() {
  const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria{
      {"exact distance identity", exact_identity},
      {"construction validity", construction_validity},
      {"oracle equivalence", oracle_equivalence},
      {"decay exponent", decay_exponent},
      {"separation of non-multiples", separation},
      {"limit directions", directions},
      {"nested balls", nested_balls},
      {"two-dimensional theory", cf2_theory},
      {"assembled lattice exponent trend", assembled_exponent},
      {"norm-form sanity", norm_form},
  };
  int failed = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    Outcome o;
    try {
      o = criteria[i].second();
    } catch (const std::exception& e) {
      o = {false, std::string("error: ") + e.what()};
    }
    if (!o.pass) ++failed;
    std::printf("%s criterion %zu (%s): %s\n", o.pass ? "PASS" : "FAIL", i + 1, criteria[i].first.c_str(),
                o.detail.c_str());
    std::fflush(stdout);
  }
  std::printf("%d of %zu criteria passed\n", static_cast<int>(criteria.size()) - failed, criteria.size());
  return failed;
}
