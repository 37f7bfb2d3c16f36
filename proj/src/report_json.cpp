#include "sps/report.hpp"

#include <cmath>

#include "sps/simd.hpp"

namespace sps {

namespace {

// NaN and infinities are not JSON numbers.
Json num(double x) { return std::isfinite(x) ? Json(x) : Json(nullptr); }

Json nums(const std::vector<double>& v) {
  Json a = Json::array();
  for (double x : v) a.push_back(num(x));
  return a;
}

}  // namespace

Json environment_stamp() {
  Json j;
  j["compiler"] = __VERSION__;
  j["cplusplus"] = static_cast<long>(__cplusplus);
  j["isa"] = std::string(simd::isa_name(simd::active_isa()));
  j["cpu_avx2"] = simd::cpu_has_avx2();
  return j;
}

Json to_json(const ProblemParams& p) {
  return Json{{"gamma", p.gamma}, {"a", p.a}, {"p", p.p}, {"c", num(p.c)}};
}

Json to_json(const SolverConfig& c) {
  return Json{{"n", c.n},
              {"r_max", c.r_max},
              {"spacing", c.spacing == Spacing::graded ? "graded" : "uniform"},
              {"tol_grad", c.tol_grad},
              {"tol_energy", c.tol_energy},
              {"max_iter", c.max_iter},
              {"max_seconds", c.max_seconds},
              {"adapt_domain", c.adapt_domain}};
}

Json to_json(const SharpConstants& k) {
  Json j{{"gamma", k.gamma}, {"a", k.a},     {"p", k.p},   {"K_GN", num(k.K_GN)},
         {"K_H", num(k.K_H)}, {"M", num(k.M)}, {"N", num(k.N)}, {"c1", num(k.c1)},
         {"k0", num(k.k0)},   {"k1", num(k.k1)}};
  j["crit_level"] = k.crit_level ? num(*k.crit_level) : Json(nullptr);
  return j;
}

Json to_json(const LineFit& f) {
  return Json{{"slope", num(f.slope)},          {"intercept", num(f.intercept)},
              {"residual", num(f.residual)},    {"slope_stderr", num(f.slope_stderr)},
              {"points", f.points},             {"flagged", f.flagged}};
}

Json to_json(const BranchResult& r, bool with_profile) {
  Json j{{"branch", to_string(r.branch)},
         {"converged", r.converged},
         {"energy", num(r.energy)},
         {"lambda", num(r.lambda)},
         {"lambda_direct", num(r.lambda_direct)},
         {"A", num(r.e.A)},
         {"B", num(r.e.B)},
         {"C", num(r.e.C)},
         {"D", num(r.e.D)},
         {"q_rel", num(r.q_rel)},
         {"eq_rel", num(r.eq_rel)},
         {"grad_rel", num(r.grad_rel)},
         {"residual", num(r.residual)},
         {"energy_change", num(r.energy_change)},
         {"min_interior", num(r.min_interior)},
         {"classification", to_string(r.classification)},
         {"iterations", r.iterations},
         {"n", r.u.grid().n},
         {"r_max", r.u.grid().r_max}};
  if (with_profile) {
    j["r"] = nums(r.u.grid().r);
    j["u"] = nums(r.u.values());
  }
  return j;
}

Json to_json(const BranchSummary& s) {
  Json j{{"ok", s.ok},
         {"energy", num(s.energy)},
         {"lambda", num(s.lambda)},
         {"lambda_direct", num(s.lambda_direct)},
         {"A", num(s.A)},
         {"B", num(s.B)},
         {"C", num(s.C)},
         {"q_rel", num(s.q_rel)},
         {"eq_rel", num(s.eq_rel)},
         {"grad_rel", num(s.grad_rel)},
         {"residual", num(s.residual)},
         {"min_interior", num(s.min_interior)},
         {"r_max", num(s.r_max)},
         {"iterations", s.iterations},
         {"classification", s.classification}};
  if (!s.error.empty()) j["error"] = s.error;
  return j;
}

Json to_json(const SweepSpec& s) {
  return Json{{"params", to_json(s.params)},
              {"c_values", nums(s.c_values)},
              {"c_lo", s.c_lo},
              {"c_hi", s.c_hi},
              {"points", s.points},
              {"solver", to_json(s.solver)},
              {"fit_exclude", s.fit_exclude},
              {"continuity", s.continuity},
              {"seed", s.seed}};
}

Json to_json(const SweepReport& r) {
  Json pts = Json::array();
  for (const auto& p : r.points) {
    Json e{{"c", p.c}};
    if (r.two_branch) {
      e["plus"] = to_json(p.plus);
      e["minus"] = to_json(p.minus);
    } else {
      e["global"] = to_json(p.global);
    }
    pts.push_back(std::move(e));
  }
  Json j{{"constants", to_json(r.consts)}, {"two_branch", r.two_branch}, {"points", pts}};
  if (r.two_branch) {
    Json mono = Json::array();
    for (bool b : r.gamma_minus_decreasing) mono.push_back(b);
    j["fits"] = Json{{"lambda_plus", to_json(r.lambda_plus_fit)},
                     {"gamma_plus", to_json(r.gamma_plus_fit)},
                     {"lambda_minus", to_json(r.lambda_minus_fit)}};
    j["K_lambda_plus"] = num(r.K_lambda_plus);
    j["K_gamma_plus"] = num(r.K_gamma_plus);
    j["K_lambda_minus"] = num(r.K_lambda_minus);
    j["gamma_minus_smallest"] = num(r.gamma_minus_smallest);
    j["crit_gap"] = num(r.crit_gap);
    j["gamma_minus_decreasing"] = mono;
    j["gamma_minus_monotone"] = r.gamma_minus_monotone;
    j["continuity"] = Json{{"c", num(r.continuity.c)},
                           {"deltas", nums(r.continuity.deltas)},
                           {"diffs", nums(r.continuity.diffs)},
                           {"pass", r.continuity.pass}};
  } else {
    j["fits"] = Json{{"m", to_json(r.m_fit)}};
    j["K1"] = num(r.K1);
    j["K2"] = num(r.K2);
    j["K3"] = num(r.K3);
    j["m_negative"] = r.m_negative;
    j["lambda_positive"] = r.lambda_positive;
    j["explicit_bound"] = r.explicit_bound;
  }
  j["flagged"] = r.flagged;
  return j;
}

Json to_json(const NonexistenceReport& r) {
  Json trials = Json::array();
  for (const auto& t : r.trials)
    trials.push_back(Json{{"epsilon", num(t.epsilon)},
                          {"min_energy", num(t.min_energy)},
                          {"final_energy", num(t.final_energy)},
                          {"lambda", num(t.lambda)},
                          {"lambda_direct", num(t.lambda_direct)},
                          {"grad_rel", num(t.grad_rel)},
                          {"peak_A", num(t.peak_A)},
                          {"iterations", t.iterations},
                          {"stop_reason", t.stop_reason}});
  return Json{{"regime", r.regime},
              {"profiles", r.profiles},
              {"t_points", r.t_points},
              {"min_dg", num(r.min_dg)},
              {"monotone", r.monotone},
              {"crit_level", num(r.crit_level)},
              {"min_energy", num(r.min_energy)},
              {"above_threshold", r.above_threshold},
              {"lambda_negative", r.lambda_negative},
              {"trials", trials},
              {"refinement_n", nums(r.refinement_n)},
              {"refinement_energy", nums(r.refinement_energy)}};
}

Json to_json(const BubbleEstimates& b) {
  Json rows = Json::array();
  for (const auto& r : b.rows)
    rows.push_back(Json{{"epsilon", r.epsilon}, {"A", num(r.A)}, {"C6", num(r.C6)},
                        {"L2", num(r.L2)},      {"L3", num(r.L3)}, {"L5", num(r.L5)}});
  return Json{{"rows", rows},
              {"q2", to_json(b.q2)},
              {"q5", to_json(b.q5)},
              {"q3_log", to_json(b.q3_log)},
              {"q3_slope_ratio", num(b.q3_slope_ratio)},
              {"A_limit", num(b.A_limit)},
              {"C_limit", num(b.C_limit)}};
}

Json to_json(const InteractionStudy& s) {
  Json rows = Json::array();
  for (const auto& r : s.rows)
    rows.push_back(Json{{"epsilon", r.epsilon},
                        {"sup_F", num(r.sup_F)},
                        {"argmax_t", num(r.argmax_t)},
                        {"gamma_plus", num(r.gamma_plus)},
                        {"crit_level", num(r.crit_level)},
                        {"margin", num(r.margin)},
                        {"t1", num(r.t1)},
                        {"tail_below_half", r.tail_below_half},
                        {"cross_term_ok", r.cross_term_ok},
                        {"equivalence_ok", r.equivalence_ok},
                        {"max_mass_error", num(r.max_mass_error)}});
  return Json{{"rows", rows}, {"margin_fit", to_json(s.margin_fit)}};
}

Json to_json(const std::vector<RegimeRow>& rows) {
  Json a = Json::array();
  for (const auto& r : rows)
    a.push_back(Json{{"gamma", r.input.gamma},
                     {"a", r.input.a},
                     {"p", r.input.p},
                     {"c", num(r.c)},
                     {"predicted", r.predicted},
                     {"observed", r.observed},
                     {"match", r.match},
                     {"detail", r.detail}});
  return a;
}

Json document(Json config, Json results) {
  return Json{{"config", std::move(config)},
              {"results", std::move(results)},
              {"environment", environment_stamp()}};
}

}  // namespace sps
