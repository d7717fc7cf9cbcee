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

// JSON and CSV forms of states and reports. Integers are decimal strings,
// rationals "p/q", binary floats MPFR hex, so nothing is lost in transit.

#pragma once

#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "dioph/cf2.hpp"
#include "dioph/construction.hpp"
#include "dioph/diagnostics.hpp"
#include "dioph/oracle.hpp"
#include "dioph/spectra.hpp"

namespace dioph {

using Json = nlohmann::ordered_json;

inline constexpr int kSchemaVersion = 1;
inline constexpr const char* kToolVersion = "0.3.0";

// ---------------------------------------------------------------------------
// Scalars.

inline std::string rational_string(const Rational& q) {
  Rational c = q;
  c.canonicalize();
  return c.get_num().get_str() + "/" + c.get_den().get_str();
}

inline Json to_json(const Integer& z) { return z.get_str(); }
inline Json to_json(const Rational& q) { return rational_string(q); }

inline Integer integer_from_json(const Json& j) {
  if (!j.is_string()) throw ArgumentError("expected a decimal string");
  return parse_integer(j.get<std::string>());
}
inline Rational rational_from_json(const Json& j) {
  if (!j.is_string()) throw ArgumentError("expected a rational string");
  return parse_rational(j.get<std::string>());
}

inline Json to_json(const CertifiedReal& x) {
  Json j;
  j["lo"] = x.lower().to_hex();
  j["hi"] = x.upper().to_hex();
  j["prec_lo"] = static_cast<long>(x.lower().prec());
  j["prec_hi"] = static_cast<long>(x.upper().prec());
  j["approx"] = x.upper().to_decimal(17) == x.lower().to_decimal(17) ? x.lower().to_decimal(17)
                                                                     : "[" + x.lower().to_decimal(17) + ", " +
                                                                           x.upper().to_decimal(17) + "]";
  return j;
}

inline CertifiedReal certified_from_json(const Json& j) {
  return CertifiedReal::from_bounds(BigFloat::from_hex(j.at("lo").get<std::string>(), j.at("prec_lo").get<long>()),
                                    BigFloat::from_hex(j.at("hi").get<std::string>(), j.at("prec_hi").get<long>()));
}

/// log10 of an enclosure of a positive value, as a short readable string.
inline std::string log10_string(const CertifiedReal& x) {
  std::ostringstream os;
  os.precision(10);
  os << log10_mid(x);
  return os.str();
}

inline Json to_json(const IntVector& v) {
  Json a = Json::array();
  for (const auto& c : v.coords()) a.push_back(c.get_str());
  return a;
}

inline IntVector vector_from_json(const Json& j) {
  std::vector<Integer> c;
  for (const auto& x : j) c.push_back(integer_from_json(x));
  return IntVector(std::move(c));
}

inline Json to_json(const RationalPoint& p) {
  Json a = Json::array();
  for (const auto& c : p.coords()) a.push_back(rational_string(c));
  return a;
}

template <class T>
Json array_of(const std::vector<T>& xs) {
  Json a = Json::array();
  for (const auto& x : xs) a.push_back(to_json(x));
  return a;
}

inline Json to_json(const PrecisionPolicy& p) { return Json{{"start", p.start}, {"cap", p.cap}}; }

// ---------------------------------------------------------------------------
// Construction state.

inline Json to_json(const WindowQuantities& q) {
  Json j;
  j["B_sq"] = to_json(q.B_sq);
  Json D = Json::object();
  for (const auto& [l, v] : q.D_sq) D[std::to_string(l)] = to_json(v);
  j["D_sq"] = D;
  j["R_sq"] = to_json(q.R_sq);
  Json G = Json::object();
  for (const auto& [l, v] : q.gram_dets) G[std::to_string(l)] = to_json(v);
  j["gram_dets"] = G;
  j["full_det"] = to_json(q.full_det);
  return j;
}

inline WindowQuantities quantities_from_json(const Json& j) {
  WindowQuantities q;
  q.B_sq = rational_from_json(j.at("B_sq"));
  for (const auto& [k, v] : j.at("D_sq").items()) q.D_sq[std::stoi(k)] = rational_from_json(v);
  q.R_sq = rational_from_json(j.at("R_sq"));
  for (const auto& [k, v] : j.at("gram_dets").items()) q.gram_dets[std::stoi(k)] = integer_from_json(v);
  q.full_det = integer_from_json(j.at("full_det"));
  return q;
}

inline Json to_json(const ChainCheck& c) {
  return Json{{"n", c.n},
              {"gram_n", to_json(c.gram_n)},
              {"gram_n_minus_1", to_json(c.gram_n_minus_1)},
              {"next_norm_sq", to_json(c.next_norm_sq)},
              {"holds", c.holds},
              {"ratio", c.ratio}};
}

inline ChainCheck chain_from_json(const Json& j) {
  ChainCheck c;
  c.n = j.at("n").get<int>();
  c.gram_n = integer_from_json(j.at("gram_n"));
  c.gram_n_minus_1 = integer_from_json(j.at("gram_n_minus_1"));
  c.next_norm_sq = integer_from_json(j.at("next_norm_sq"));
  c.holds = j.at("holds").get<bool>();
  c.ratio = j.at("ratio").get<double>();
  return c;
}

inline Json to_json(const HypothesisReport& h) {
  Json j;
  j["k"] = h.k;
  j["unimodular"] = h.unimodular;
  j["full_det"] = to_json(h.full_det);
  j["obtuse"] = h.obtuse;
  j["inner"] = to_json(h.inner);
  j["growth"] = h.growth;
  j["B_sq"] = to_json(h.B_sq);
  j["D2_sq"] = to_json(h.D2_sq);
  j["B_witness"] = to_json(h.B_witness);
  j["D2_witness"] = to_json(h.D2_witness);
  j["chain"] = h.chain;
  j["chain_checks"] = array_of(h.chain_checks);
  j["sign"] = h.sign;
  j["sign_product"] = to_json(h.sign_product);
  return j;
}

inline HypothesisReport hypotheses_from_json(const Json& j) {
  HypothesisReport h;
  h.k = j.at("k").get<long>();
  h.unimodular = j.at("unimodular").get<bool>();
  h.full_det = integer_from_json(j.at("full_det"));
  h.obtuse = j.at("obtuse").get<bool>();
  h.inner = integer_from_json(j.at("inner"));
  h.growth = j.at("growth").get<bool>();
  h.B_sq = rational_from_json(j.at("B_sq"));
  h.D2_sq = rational_from_json(j.at("D2_sq"));
  h.B_witness = certified_from_json(j.at("B_witness"));
  h.D2_witness = certified_from_json(j.at("D2_witness"));
  h.chain = j.at("chain").get<bool>();
  for (const auto& c : j.at("chain_checks")) h.chain_checks.push_back(chain_from_json(c));
  h.sign = j.at("sign").get<bool>();
  h.sign_product = rational_from_json(j.at("sign_product"));
  return h;
}

inline Json to_json(const StepDiagnostics& s) {
  Json j;
  j["k"] = s.k;
  j["mu"] = array_of(s.mu);
  j["nu"] = array_of(s.nu);
  j["nu_enclosures"] = array_of(s.nu_enclosures);
  j["target_enclosures"] = array_of(s.target_enclosures);
  j["nu_in_range"] = s.nu_in_range;
  j["deciding_bits"] = s.deciding_bits;
  j["growth_ratio"] = to_json(s.growth_ratio);
  j["hypotheses"] = to_json(s.hypotheses);
  j["quantities"] = to_json(s.quantities);
  return j;
}

inline StepDiagnostics step_from_json(const Json& j) {
  StepDiagnostics s;
  s.k = j.at("k").get<long>();
  for (const auto& x : j.at("mu")) s.mu.push_back(integer_from_json(x));
  for (const auto& x : j.at("nu")) s.nu.push_back(rational_from_json(x));
  for (const auto& x : j.at("nu_enclosures")) s.nu_enclosures.push_back(certified_from_json(x));
  for (const auto& x : j.at("target_enclosures")) s.target_enclosures.push_back(certified_from_json(x));
  s.nu_in_range = j.at("nu_in_range").get<bool>();
  s.deciding_bits = j.at("deciding_bits").get<long>();
  s.growth_ratio = certified_from_json(j.at("growth_ratio"));
  s.hypotheses = hypotheses_from_json(j.at("hypotheses"));
  s.quantities = quantities_from_json(j.at("quantities"));
  return s;
}

/// Envelope shared by every output document.
inline Json envelope(const std::string& kind, const Json& config, const std::vector<std::string>& checks) {
  Json j;
  j["schema"] = "dioph/" + kind;
  j["schema_version"] = kSchemaVersion;
  j["tool_version"] = kToolVersion;
  j["config"] = config;
  j["checks"] = checks;
  return j;
}

inline Json state_to_json(const ConstructionState& s) {
  Json j;
  j["d"] = s.d();
  j["beta"] = to_json(s.beta());
  j["policy"] = to_json(s.policy());
  j["steps"] = s.steps();
  j["vectors"] = array_of(s.vectors());
  j["diagnostics"] = array_of(s.diagnostics());
  return j;
}

inline ConstructionState state_from_json(const Json& j) {
  const Json& st = j.contains("state") ? j.at("state") : j;
  if (j.contains("schema_version") && j.at("schema_version").get<int>() != kSchemaVersion)
    throw ArgumentError("unsupported schema version " + std::to_string(j.at("schema_version").get<int>()));
  PrecisionPolicy p;
  p.start = st.at("policy").at("start").get<long>();
  p.cap = st.at("policy").at("cap").get<long>();
  p.validate();
  std::vector<IntVector> vs;
  for (const auto& v : st.at("vectors")) vs.push_back(vector_from_json(v));
  std::vector<StepDiagnostics> ds;
  for (const auto& x : st.at("diagnostics")) ds.push_back(step_from_json(x));
  const int d = st.at("d").get<int>();
  for (const auto& v : vs)
    if (v.dim() != static_cast<std::size_t>(d)) throw ArgumentError("state vector of the wrong dimension");
  return ConstructionState::from_parts(d, rational_from_json(st.at("beta")), p, std::move(vs), std::move(ds));
}

inline std::string state_steps_csv(const ConstructionState& s) {
  std::ostringstream os;
  os << "k,mu,norm_sq_new,digits_new,growth_ratio_lo,growth_ratio_hi,deciding_bits,unimodular,obtuse,growth,chain,"
        "sign,nu_in_range\n";
  for (const auto& st : s.diagnostics()) {
    std::string mu;
    for (std::size_t i = 0; i < st.mu.size(); ++i) mu += (i ? " " : "") + st.mu[i].get_str();
    const std::size_t idx = static_cast<std::size_t>(st.k) + static_cast<std::size_t>(s.d());
    Integer n = idx < s.size() ? s.proj_norm_sq(idx) : Integer(0);
    const auto& h = st.hypotheses;
    os << st.k << ",\"" << mu << "\"," << n.get_str() << "," << n.get_str().size() << ","
       << st.growth_ratio.lower().to_decimal(17) << "," << st.growth_ratio.upper().to_decimal(17) << ","
       << st.deciding_bits << "," << h.unimodular << "," << h.obtuse << "," << h.growth << "," << h.chain << ","
       << h.sign << "," << st.nu_in_range << "\n";
  }
  return os.str();
}

// ---------------------------------------------------------------------------
// Reports.

inline Json to_json(const BestApproxRecord& r) {
  return Json{{"vector", to_json(r.vector)},
              {"value", to_json(r.value)},
              {"proj_norm_sq", to_json(r.proj_norm_sq)},
              {"tie", r.tie}};
}

inline Json to_json(const WindowReport& r) {
  Json j;
  j["match"] = r.match;
  j["K"] = r.K;
  j["M"] = r.M;
  j["surrogate_index"] = r.N;
  j["alpha_hat"] = to_json(r.alpha_hat);
  j["X_sq"] = to_json(r.X_sq);
  j["lower_norm_sq"] = to_json(r.lower_norm);
  j["points_examined"] = r.points_examined;
  j["records"] = array_of(r.records);
  j["expected"] = array_of(r.expected);
  j["below_window"] = array_of(r.below_window);
  if (r.mismatch) {
    Json m;
    m["position"] = r.mismatch->position;
    if (r.mismatch->expected) m["expected"] = to_json(*r.mismatch->expected);
    if (r.mismatch->found) m["found"] = to_json(*r.mismatch->found);
    if (r.mismatch->expected_value) m["expected_value"] = to_json(*r.mismatch->expected_value);
    if (r.mismatch->found_value) m["found_value"] = to_json(*r.mismatch->found_value);
    j["mismatch"] = m;
  } else {
    j["mismatch"] = nullptr;
  }
  return j;
}

inline Json to_json(const IdentityCheck& c) {
  return Json{{"k", c.k}, {"verdict", to_string(c.verdict)}, {"lhs", to_json(c.lhs)}, {"rhs", to_json(c.rhs)}};
}

inline Json to_json(const NestedBallsReport& r) {
  return Json{{"k", r.k},
              {"status", to_string(r.status)},
              {"hyp_basis", r.hyp_basis},
              {"hyp_norms", r.hyp_norms},
              {"hyp_chain", r.hyp_chain},
              {"radius_shrinks", r.radius_shrinks},
              {"contained", r.contained},
              {"deciding_bits", r.deciding_bits},
              {"R_sq_k_digits", r.R_sq_k.get_den().get_str().size()},
              {"R_sq_ratio", Rational(r.R_sq_next / r.R_sq_k).get_d()}};
}

inline Json to_json(const MergedBoundsReport& r) {
  Json j;
  j["k"] = r.k;
  j["status"] = to_string(r.status);
  j["preconditions"] = Json{{"basis", r.pre_basis},         {"norms", r.pre_norms},
                            {"obtuse", r.pre_obtuse},       {"chain", r.pre_chain},
                            {"in_ball", r.pre_in_ball},     {"in_interior", r.pre_in_interior},
                            {"hemisphere", r.pre_hemisphere}};
  j["pair"] = Json{{"holds", r.pair_holds}, {"scaled", to_json(r.pair_scaled)}, {"approx", r.pair_scaled.get_d()}};
  j["enumerated"] = r.enumerated;
  j["ball_holds"] = r.enumerated ? Json(r.ball_holds) : Json(nullptr);
  j["annulus_holds"] = r.enumerated ? Json(r.annulus_holds) : Json(nullptr);
  j["points_checked"] = r.points_checked;
  j["annulus_points"] = r.annulus_points;
  j["annulus_min_ratio"] = r.enumerated ? Json(r.annulus_min_ratio) : Json(nullptr);
  if (r.ball_witness) j["ball_witness"] = to_json(*r.ball_witness);
  if (r.annulus_witness) j["annulus_witness"] = to_json(*r.annulus_witness);
  if (!r.note.empty()) j["note"] = r.note;
  return j;
}

inline Json to_json(const SurrogateAlpha& a) {
  return Json{{"index", a.index}, {"alpha", to_json(a.alpha)}, {"R_sq_log10", Rational(a.R_sq).get_d() > 0
                                                                                   ? std::log10(Rational(a.R_sq).get_d())
                                                                                   : -std::numeric_limits<double>::infinity()}};
}

inline Json to_json(const DecaySeries& s) {
  Json j;
  j["surrogate_index"] = s.alpha.index;
  j["slope"] = to_json(s.slope);
  j["slope_mid"] = s.slope_mid;
  j["slope_stderr"] = s.slope_stderr;
  j["target"] = to_json(s.target);
  j["target_approx"] = s.target.get_d();
  j["intersects_band"] = s.intersects_band;
  j["wide_uncertainty"] = s.wide_uncertainty;
  j["points"] = s.entries.size();
  j["skipped"] = s.skipped;
  return j;
}

inline std::string decay_csv(const DecaySeries& s) {
  std::ostringstream os;
  os << "k,norm_sq,log_norm_lo,log_norm_hi,P_lo,P_hi,log_P_lo,log_P_hi\n";
  for (const auto& e : s.entries) {
    CertifiedReal P = exp(e.log_P);
    os << e.k << "," << e.norm_sq.get_str() << "," << e.log_norm.lower().to_decimal(17) << ","
       << e.log_norm.upper().to_decimal(17) << "," << P.lower().to_decimal(17) << "," << P.upper().to_decimal(17)
       << "," << e.log_P.lower().to_decimal(17) << "," << e.log_P.upper().to_decimal(17) << "\n";
  }
  return os.str();
}

inline Json to_json(const SeparationReport& r) {
  Json j;
  j["X_sq"] = to_json(r.X_sq);
  j["surrogate_index"] = r.alpha.index;
  j["exponent"] = to_json(r.exponent);
  j["empty"] = r.empty;
  j["points"] = r.points;
  j["nonmultiples"] = r.nonmultiples;
  j["positive"] = r.positive;
  if (r.empty) {
    j["c_sep"] = "+inf";
  } else {
    j["c_sep"] = to_json(r.c_sep);
    if (r.minimizer) j["minimizer"] = to_json(*r.minimizer);
  }
  Json best = Json::array();
  for (const auto& b : r.best)
    best.push_back(Json{{"vector", to_json(b.vector)},
                        {"proj_norm_sq", to_json(b.norm_sq)},
                        {"value", to_json(b.value)},
                        {"normalized", to_json(b.normalized)}});
  j["best_products"] = best;
  if (!r.best.empty()) {
    j["best_max"] = to_json(r.best_max);
    j["best_min"] = to_json(r.best_min);
    if (!r.empty) j["factor_c"] = to_json(r.factor_c);
  }
  j["finalists"] = r.finalists;
  return j;
}

inline Json to_json(const DirectionReport& r) {
  Json j;
  j["pair_count"] = r.pair_count;
  j["disjoint"] = r.disjoint;
  j["even_limit"] = array_of(r.even_limit);
  j["odd_limit"] = array_of(r.odd_limit);
  j["even_radius_log10"] = log10_mid(r.even_radius);
  j["odd_radius_log10"] = log10_mid(r.odd_radius);
  j["cross_cosine"] = to_json(r.cross_cosine);
  j["cross_cosine_full"] = to_json(r.cross_cosine_full);
  j["cross_cosine_gap"] = r.cross_cosine_gap;
  Json e = Json::array(), o = Json::array();
  for (std::size_t i = 0; i < r.even_distances.size(); ++i)
    e.push_back(Json{{"k", r.even_index[i]}, {"log10_distance", log10_mid(r.even_distances[i])}});
  for (std::size_t i = 0; i < r.odd_distances.size(); ++i)
    o.push_back(Json{{"k", r.odd_index[i]}, {"log10_distance", log10_mid(r.odd_distances[i])}});
  j["even_distances"] = e;
  j["odd_distances"] = o;
  j["K"] = r.K;
  j["monotone_after_K"] = r.monotone_after_K;
  j["last_increase"] = r.last_increase;
  j["tail_ratio_ok"] = r.tail_ratio_ok;
  return j;
}

inline Json to_json(const LinearForm& f) {
  Json j;
  if (f.kind == LinearForm::Kind::Rational) {
    j["kind"] = "rational";
    j["coefficients"] = array_of(f.rational);
  } else {
    j["kind"] = "power-basis";
    j["polynomial"] = polynomial_string(f.poly);
    j["root_lo"] = to_json(f.root.lo);
    j["root_hi"] = to_json(f.root.hi);
    j["root_approx"] = f.root.mid();
  }
  return j;
}

inline Json to_json(const LatticeSpec& s) {
  Json j;
  j["d"] = s.d;
  j["kind"] = s.kind;
  if (!s.field.empty()) j["field"] = s.field;
  j["norm_form"] = s.norm_form;
  j["forms"] = array_of(s.forms);
  j["determinant"] = to_json(s.determinant);
  if (s.beta) j["beta"] = to_json(*s.beta);
  if (s.alpha_index) j["alpha_index"] = *s.alpha_index;
  if (s.target) {
    j["target"] = to_json(*s.target);
    j["target_approx"] = s.target->get_d();
  }
  j["nondegeneracy"] = to_string(s.nondegeneracy);
  j["companion_at_limits"] = array_of(s.companion_at_limits);
  j["warnings"] = s.warnings;
  return j;
}

inline Json to_json(const OmegaRecord& r) {
  Json j;
  j["z"] = to_json(r.z);
  j["probe"] = r.probe;
  j["infinite"] = r.infinite;
  j["log10_norm"] = log10_mid(r.norm);
  if (r.infinite) {
    j["ratio"] = "+inf";
  } else {
    j["Pi"] = to_json(r.Pi);
    j["ratio"] = to_json(r.ratio);
  }
  return j;
}

inline Json to_json(const OmegaEstimate& e) {
  Json j;
  j["caveat"] = e.caveat;
  j["omega_hat"] = e.omega_infinite ? Json("+inf") : to_json(e.omega_hat);
  if (e.target) {
    j["target"] = to_json(*e.target);
    j["target_approx"] = e.target->get_d();
  }
  j["budget"] = e.budget;
  j["partial"] = e.partial;
  j["points_examined"] = e.points_examined;
  j["probes_examined"] = e.probes_examined;
  j["radius_sq"] = e.radius_sq;
  j["min_log_norm"] = e.min_log_norm;
  j["indeterminate"] = e.indeterminate;
  j["below_norm_bound"] = e.below_norm_bound;
  j["infinite_witnesses"] = e.infinite_witnesses;
  j["trend_increasing"] = e.trend_increasing;
  j["records"] = array_of(e.records);
  Json probes = Json::array();
  for (const auto& p : e.probe_points)
    probes.push_back(Json{{"log10_norm", log10_mid(p.norm)},
                          {"ratio", !p.infinite && !mpfr_nan_p(p.ratio.lower().get()) ? Json(p.ratio.mid_double()) : Json(nullptr)}});
  j["probe_ratios"] = probes;
  return j;
}

inline std::string records_csv(const OmegaEstimate& e) {
  std::ostringstream os;
  os << "index,probe,norm_sq_lo,norm_sq_hi,Pi_lo,Pi_hi,ratio_lo,ratio_hi\n";
  for (std::size_t i = 0; i < e.records.size(); ++i) {
    const auto& r = e.records[i];
    CertifiedReal n2 = r.norm * r.norm;
    os << i << "," << r.probe << "," << n2.lower().to_decimal(17) << "," << n2.upper().to_decimal(17) << ",";
    if (r.infinite)
      os << "0,0,inf,inf\n";
    else
      os << r.Pi.lower().to_decimal(17) << "," << r.Pi.upper().to_decimal(17) << "," << r.ratio.lower().to_decimal(17)
         << "," << r.ratio.upper().to_decimal(17) << "\n";
  }
  return os.str();
}

inline Json to_json(const CFState& cf) {
  Json j;
  if (cf.beta) j["beta"] = to_json(*cf.beta);
  j["N"] = cf.size() - 1;
  j["partial_quotients"] = array_of(cf.a);
  // Convergents grow quickly; store lengths and the last few in full.
  Json conv = Json::array();
  for (std::size_t n = 0; n < cf.size(); ++n) {
    Json c{{"n", n}, {"q_digits", cf.q[n].get_str().size()}};
    if (cf.q[n].get_str().size() <= 2000) {
      c["p"] = to_json(cf.p[n]);
      c["q"] = to_json(cf.q[n]);
    }
    conv.push_back(c);
  }
  j["convergents"] = conv;
  return j;
}

inline Json to_json(const CF2Report& r) {
  Json j;
  j["determinant_ok"] = r.determinant_ok;
  j["recurrence_ok"] = r.recurrence_ok;
  j["mu_hat"] = r.mu_hat;
  j["mu_target"] = r.mu_target;
  Json mu = Json::array();
  for (const auto& m : r.mu) mu.push_back(Json{{"n", m.n}, {"mu", m.value}});
  j["mu"] = mu;
  j["slope"] = r.slope;
  j["slope_target"] = r.slope_target;
  Json lg;
  lg["Q"] = r.legendre.Q;
  lg["examined"] = r.legendre.examined;
  lg["violations"] = r.legendre.violations;
  lg["convergent_violations"] = r.legendre.convergent_violations;
  lg["nonconvergent_violations"] = r.legendre.nonconvergent_violations;
  lg["indeterminate"] = r.legendre.indeterminate;
  lg["min_nonconvergent"] = r.legendre.min_nonconvergent;
  lg["min_at_q"] = r.legendre.min_at_q;
  j["legendre"] = lg;
  return j;
}

// ---------------------------------------------------------------------------
// Files.

inline void write_text(const std::string& path, const std::string& text) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw ArgumentError("cannot write " + path);
  f << text;
  if (!f) throw ArgumentError("write failed for " + path);
}

inline void write_json(const std::string& path, const Json& j) { write_text(path, j.dump(2) + "\n"); }

inline Json read_json(const std::string& path) {
  std::ifstream f(path, std::ios::binary);
  if (!f) throw ArgumentError("cannot read " + path);
  try {
    return Json::parse(f);
  } catch (const nlohmann::json::exception& e) {
    throw ArgumentError("malformed JSON in " + path + ": " + e.what());
  }
}

}  // namespace dioph
