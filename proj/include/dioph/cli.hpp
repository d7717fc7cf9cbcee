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

#include <cstdint>
#include <filesystem>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "dioph/cf2.hpp"
#include "dioph/construction.hpp"
#include "dioph/diagnostics.hpp"
#include "dioph/io.hpp"
#include "dioph/oracle.hpp"
#include "dioph/spectra.hpp"

namespace dioph::cli {

enum ExitCode : int { kPassed = 0, kCheckFailed = 1, kError = 2 };

/// Per-command defaults of --enum-budget.
inline constexpr std::uint64_t kEnumerationDefault = 250'000'000;  // verify, diagnose: half-ball points
inline constexpr std::uint64_t kOmegaDefault = 1'000'000;          // exponent: preimages examined
inline constexpr long kLegendreDefault = 10'000;                  // cf2: largest denominator scanned
inline constexpr long kSeparationNormSq = 1'000'000;              // diagnose: separation radius squared

struct RunConfig {
  std::string command;
  int d = 3;
  std::string beta = "1";
  long steps = 15;
  long precision_start = PrecisionPolicy{}.start;
  long precision_cap = PrecisionPolicy{}.cap;
  std::optional<std::uint64_t> enum_budget;
  std::string state;
  std::string out = ".";
  long n = 25;  // cf2 only

  PrecisionPolicy policy() const { return {precision_start, precision_cap}; }
  Rational beta_value() const { return parse_rational(beta); }

  Json to_json() const {
    Json j;
    j["command"] = command;
    j["d"] = d;
    try {
      j["beta"] = rational_string(beta_value());
    } catch (const std::exception&) {
      j["beta"] = beta;  // unparsed, for error reports
    }
    j["steps"] = steps;
    j["precision_start"] = precision_start;
    j["precision_cap"] = precision_cap;
    j["enum_budget"] = enum_budget ? Json(*enum_budget) : Json(nullptr);
    j["state"] = state;
    j["out"] = out;
    j["n"] = n;
    return j;
  }

  static RunConfig from_json(const Json& j) {
    RunConfig c;
    c.command = j.at("command").get<std::string>();
    c.d = j.at("d").get<int>();
    c.beta = j.at("beta").get<std::string>();
    c.steps = j.at("steps").get<long>();
    c.precision_start = j.at("precision_start").get<long>();
    c.precision_cap = j.at("precision_cap").get<long>();
    if (!j.at("enum_budget").is_null()) c.enum_budget = j.at("enum_budget").get<std::uint64_t>();
    c.state = j.at("state").get<std::string>();
    c.out = j.at("out").get<std::string>();
    c.n = j.at("n").get<long>();
    return c;
  }
};

/// Neutral identifiers of the checks each command performs.
namespace check {
inline constexpr const char* kSeed = "seed-alpha";
inline constexpr const char* kUnimodular = "window-unimodular";
inline constexpr const char* kObtuse = "consecutive-obtuse";
inline constexpr const char* kGrowth = "norm-growth";
inline constexpr const char* kChain = "gram-chain";
inline constexpr const char* kSign = "form-sign";
inline constexpr const char* kNuRange = "coefficient-range";
inline constexpr const char* kOracle = "best-approximation-window";
inline constexpr const char* kIdentity = "alpha-distance-identity";
inline constexpr const char* kNested = "nested-balls";
inline constexpr const char* kMerged = "merged-local-bounds";
inline constexpr const char* kDecay = "product-decay";
inline constexpr const char* kSeparation = "nonmultiple-separation";
inline constexpr const char* kDirections = "limit-directions";
inline constexpr const char* kIndependence = "form-independence";
inline constexpr const char* kNondegeneracy = "companion-nondegeneracy";
inline constexpr const char* kNormBound = "norm-lower-bound";
inline constexpr const char* kOmega = "exponent-records";
inline constexpr const char* kDeterminant = "convergent-determinant";
inline constexpr const char* kMu = "irrationality-measure";
inline constexpr const char* kLegendre = "nonconvergent-bound";
}  // namespace check

inline std::string out_path(const RunConfig& c, const std::string& name) {
  return (std::filesystem::path(c.out) / name).string();
}

inline ConstructionState load_state(const RunConfig& c) {
  if (c.state.empty()) throw ArgumentError("--state is required for " + c.command);
  return state_from_json(read_json(c.state));
}

inline EnumerationConfig enumeration(const RunConfig& c, std::uint64_t fallback) {
  EnumerationConfig e;
  e.budget = c.enum_budget.value_or(fallback);
  return e;
}

// ---------------------------------------------------------------------------

inline int run_construct(const RunConfig& c) {
  ConstructionState s = construct(c.d, c.beta_value(), c.steps, c.policy());
  Threshold t = hypothesis_threshold(s);
  bool nu_ok = true;
  for (const auto& st : s.diagnostics()) nu_ok = nu_ok && st.nu_in_range;
  Json doc = envelope("state", c.to_json(),
                      {check::kSeed, check::kUnimodular, check::kObtuse, check::kGrowth, check::kChain, check::kSign,
                       check::kNuRange});
  doc["state"] = state_to_json(s);
  doc["summary"] = Json{{"basic_flags_everywhere", t.basic_flags_everywhere},
                        {"K", t.K},
                        {"K_found", t.found},
                        {"nu_in_range_everywhere", nu_ok},
                        {"last_norm_digits", s.proj_norm_sq(s.size() - 1).get_str().size()}};
  std::filesystem::create_directories(c.out);
  write_json(out_path(c, "state.json"), doc);
  write_text(out_path(c, "steps.csv"), state_steps_csv(s));
  return t.basic_flags_everywhere && t.found && nu_ok ? kPassed : kCheckFailed;
}

/// K: first k >= max(1, hypothesis threshold) with |z_{k+1}| > |z_k|, so that
/// no later vector shares the norm of z_K.
/// M: largest index with N = M + d available and the ball |z|^2 < |z_{M+1}|^2
/// within the enumeration budget.
inline std::pair<long, long> select_window(const ConstructionState& s, const EnumerationConfig& cfg) {
  long K = std::max(1L, hypothesis_threshold(s).K);
  while (K + 1 < static_cast<long>(s.size()) && s.proj_norm_sq(static_cast<std::size_t>(K + 1)) <=
                                                     s.proj_norm_sq(static_cast<std::size_t>(K)))
    ++K;
  long M = -1;
  for (long m = K; m + s.d() <= last_alpha_index(s); ++m) {
    Integer X = s.proj_norm_sq(static_cast<std::size_t>(m + 1));
    if (X > Integer("4000000000000000000")) break;
    if (half_ball_points(s.d() - 1, X.get_d()) > static_cast<double>(cfg.budget)) break;
    M = m;
  }
  if (M < K) throw BudgetExceeded("no window z_K..z_M fits the enumeration budget");
  return {K, M};
}

inline int run_verify(const RunConfig& c) {
  ConstructionState s = load_state(c);
  EnumerationConfig cfg = enumeration(c, kEnumerationDefault);
  auto [K, M] = select_window(s, cfg);
  WindowReport r = verify_window(s, K, M, cfg);
  Json doc = envelope("verify", c.to_json(), {check::kOracle});
  doc["report"] = to_json(r);
  doc["passed"] = r.match;
  std::filesystem::create_directories(c.out);
  write_json(out_path(c, "verify.json"), doc);
  return r.match ? kPassed : kCheckFailed;
}

inline int run_diagnose(const RunConfig& c) {
  ConstructionState s = load_state(c);
  EnumerationConfig cfg = enumeration(c, kEnumerationDefault);
  const long d = s.d();
  const long n = static_cast<long>(s.size());
  const long K = hypothesis_threshold(s).K;
  bool ok = true;
  Json doc = envelope("diagnostics", c.to_json(),
                      {check::kIdentity, check::kNested, check::kMerged, check::kDecay, check::kSeparation,
                       check::kDirections});
  doc["K"] = K;

  Json ids = Json::array();
  for (long k = 1; k + d <= n; ++k) {
    IdentityCheck ic = distance_alphas_check(s, k);
    ok = ok && ic.verdict == Verdict::ExactEquality;
    ids.push_back(to_json(ic));
  }
  doc["identity"] = ids;

  Json nested = Json::array();
  for (long k = std::max(1L, K); k + d <= n && k + 1 <= last_alpha_index(s); ++k) {
    NestedBallsReport r = nested_balls_check(s, k);
    ok = ok && r.status != CheckStatus::Violated;
    nested.push_back(to_json(r));
  }
  doc["nested_balls"] = nested;

  SurrogateAlpha a = surrogate_alpha(s);
  doc["surrogate"] = to_json(a);
  Json merged = Json::array();
  for (long k = std::max(0L, K); k + d < n && k + 3 < n && k + 2 <= last_alpha_index(s); ++k) {
    MergedBoundsReport r = merged_bounds_check(s, k, a.alpha, cfg);
    ok = ok && r.status != CheckStatus::Violated;
    merged.push_back(to_json(r));
  }
  doc["merged_bounds"] = merged;

  std::filesystem::create_directories(c.out);
  try {
    DecaySeries ds = decay_series(s, a);
    ok = ok && ds.intersects_band;
    doc["decay"] = to_json(ds);
    write_text(out_path(c, "decay.csv"), decay_csv(ds));
  } catch (const InsufficientData& e) {
    doc["decay"] = Json{{"error", "insufficient-data"}, {"message", e.what()}};
    ok = false;
  }

  Integer X = kSeparationNormSq;
  while (X > 1 && half_ball_points(static_cast<int>(d) - 1, X.get_d()) > static_cast<double>(cfg.budget)) X /= 2;
  SeparationReport sep = separation_check(s, a, X, cfg);
  ok = ok && sep.positive;
  doc["separation"] = to_json(sep);

  try {
    DirectionReport dr = asymptotic_directions(s, K);
    ok = ok && dr.pair_count == 2 && dr.cross_cosine_gap <= 0.05;
    doc["directions"] = to_json(dr);
  } catch (const InsufficientData& e) {
    doc["directions"] = Json{{"error", "insufficient-data"}, {"message", e.what()}};
    ok = false;
  }
  doc["passed"] = ok;
  write_json(out_path(c, "diagnostics.json"), doc);
  return ok ? kPassed : kCheckFailed;
}

inline int run_exponent(const RunConfig& c) {
  const std::uint64_t H = c.enum_budget.value_or(kOmegaDefault);
  EnumerationConfig cfg;
  cfg.budget = std::max<std::uint64_t>(H, 1);
  LatticeSpec spec;
  std::vector<IntVector> probes;
  std::vector<std::string> checks{check::kIndependence, check::kOmega};
  if (c.state.empty()) {
    spec = norm_form_lattice(builtin_field(c.d));
    checks.push_back(check::kNormBound);
  } else {
    ConstructionState s = load_state(c);
    FieldSpec field = builtin_field(s.d());
    auto comps = companion_forms(field);
    comps.pop_back();
    DirectionReport dr = asymptotic_directions(s, hypothesis_threshold(s).K);
    spec = assemble_lattice(s, comps, &dr, field.name);
    probes = construction_probes(s);
    checks.push_back(check::kNondegeneracy);
  }
  Json lat = envelope("lattice", c.to_json(), checks);
  lat["lattice"] = to_json(spec);
  std::filesystem::create_directories(c.out);
  write_json(out_path(c, "lattice.json"), lat);
  if (spec.nondegeneracy == Nondegeneracy::Indeterminate || spec.nondegeneracy == Nondegeneracy::Violated) {
    Json om = envelope("omega", c.to_json(), checks);
    om["skipped"] = "companion forms not certified nonzero at the limit directions";
    om["caveat"] = kOmegaCaveat;
    write_json(out_path(c, "omega.json"), om);
    return kCheckFailed;
  }
  OmegaEstimate est = omega_estimate(spec, H, probes, cfg);
  Json om = envelope("omega", c.to_json(), checks);
  om["estimate"] = to_json(est);
  bool ok = !est.partial && (!spec.norm_form || est.below_norm_bound == 0);
  om["passed"] = ok;
  write_json(out_path(c, "omega.json"), om);
  write_text(out_path(c, "records.csv"), records_csv(est));
  return ok ? kPassed : kCheckFailed;
}

inline int run_cf2(const RunConfig& c) {
  const long Q = c.enum_budget ? static_cast<long>(*c.enum_budget) : kLegendreDefault;
  CFState cf = cf2_build(c.beta_value(), c.n);
  CF2Report r = cf2_verify(cf, Q);
  Json doc = envelope("cf2", c.to_json(), {check::kDeterminant, check::kMu, check::kLegendre});
  doc["state"] = to_json(cf);
  doc["report"] = to_json(r);
  bool ok = r.determinant_ok && r.recurrence_ok && r.legendre.nonconvergent_violations == 0;
  doc["passed"] = ok;
  std::filesystem::create_directories(c.out);
  write_json(out_path(c, "cf2.json"), doc);
  return ok ? kPassed : kCheckFailed;
}

inline int run(const RunConfig& c) {
  if (c.command == "construct") return run_construct(c);
  if (c.command == "verify") return run_verify(c);
  if (c.command == "diagnose") return run_diagnose(c);
  if (c.command == "exponent") return run_exponent(c);
  if (c.command == "cf2") return run_cf2(c);
  throw ArgumentError("unknown command '" + c.command + "'");
}

/// Machine-readable error object, to stderr and to <out>/error.json when possible.
inline int report_error(const RunConfig& c, const std::string& type, const std::string& message) {
  Json e = envelope("error", c.to_json(), {});
  e["error"] = Json{{"type", type}, {"message", message}};
  std::cerr << e["error"].dump() << "\n";
  try {
    std::filesystem::create_directories(c.out);
    write_json(out_path(c, "error.json"), e);
  } catch (...) {
  }
  return kError;
}

inline int main(int argc, const char* const* argv) {
  CLI::App app{"Constructions and certified checks for simultaneous Diophantine approximation"};
  app.require_subcommand(1);
  RunConfig c;
  std::string budget;
  auto add_common = [&](CLI::App* sub, bool state, bool construction) {
    sub->add_option("--out", c.out, "output directory")->capture_default_str();
    sub->add_option("--enum-budget", budget, "enumeration budget (command specific)");
    if (state) sub->add_option("--state", c.state, "state.json from construct");
    if (construction) {
      sub->add_option("--d", c.d, "dimension")->capture_default_str();
      sub->add_option("--beta", c.beta, "rational beta, p/q")->capture_default_str();
      sub->add_option("--steps", c.steps, "construction steps")->capture_default_str();
      sub->add_option("--precision-start", c.precision_start, "initial guard bits")->capture_default_str();
      sub->add_option("--precision-cap", c.precision_cap, "largest guard bits")->capture_default_str();
    }
  };
  CLI::App* construct_cmd = app.add_subcommand("construct", "build a sequence and write state.json, steps.csv");
  add_common(construct_cmd, false, true);
  CLI::App* verify_cmd = app.add_subcommand("verify", "compare a state with exhaustive enumeration");
  add_common(verify_cmd, true, false);
  CLI::App* diagnose_cmd = app.add_subcommand("diagnose", "exact and certified diagnostics of a state");
  add_common(diagnose_cmd, true, false);
  CLI::App* exponent_cmd = app.add_subcommand("exponent", "assemble a lattice and estimate its exponent");
  add_common(exponent_cmd, true, false);
  exponent_cmd->add_option("--d", c.d, "field degree when no state is given")->capture_default_str();
  CLI::App* cf2_cmd = app.add_subcommand("cf2", "continued fractions with prescribed growth");
  add_common(cf2_cmd, false, false);
  cf2_cmd->add_option("--beta", c.beta, "rational beta, p/q")->capture_default_str();
  cf2_cmd->add_option("--n", c.n, "number of partial quotients")->capture_default_str();
  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? kPassed : kError;
  }
  for (auto* sub : app.get_subcommands()) c.command = sub->get_name();
  try {
    if (!budget.empty()) {
      std::size_t pos = 0;
      unsigned long long v = std::stoull(budget, &pos);
      if (pos != budget.size() || v == 0) throw ArgumentError("--enum-budget must be a positive integer");
      c.enum_budget = v;
    }
    parse_rational(c.beta);
    c.policy().validate();
    return run(c);
  } catch (const UndecidableAtCap& e) {
    return report_error(c, "undecidable-at-cap", e.what());
  } catch (const BudgetExceeded& e) {
    return report_error(c, "budget-exceeded", e.what());
  } catch (const InsufficientData& e) {
    return report_error(c, "insufficient-data", e.what());
  } catch (const DegeneracyError& e) {
    return report_error(c, "degeneracy", e.what());
  } catch (const ArgumentError& e) {
    return report_error(c, "argument", e.what());
  } catch (const std::exception& e) {
    return report_error(c, "internal", e.what());
  }
}

}  // namespace dioph::cli
