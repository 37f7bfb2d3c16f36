#include "acceptance_suite.hpp"

#include <cmath>
#include <functional>
#include <limits>
#include <memory>
#include <sstream>

#include "oracles.hpp"
#include "sps/bubbles.hpp"
#include "sps/constants.hpp"
#include "sps/errors.hpp"
#include "sps/fiber.hpp"
#include "sps/solvers.hpp"
#include "sps/sweep.hpp"

namespace acceptance {

using namespace sps;

namespace {

constexpr double kTol = 1e-5;

std::string fmt(double x) {
  std::ostringstream s;
  s.precision(4);
  s << x;
  return s.str();
}

struct Context {
  Options opt;
  SolverConfig cfg4, cfg6;
  SharpConstants k4, k6, k5g, kcrit;
  SweepReport sweep4, sweep6, sweep_global;
  BranchResult plus_half, minus_half;  // (1, 1, 4) at c1/2
  NonexistenceReport probe_monotone, probe_crit;

  explicit Context(const Options& o) : opt(o) {
    cfg4.n = o.n;
    cfg6.n = o.n_crit;
    k4 = compute_constants({1, 1, 4, 1}, o.cache);
    k6 = compute_constants({1, 1, 6, 1}, o.cache);
    k5g = compute_constants({1, -1, 5, 1}, o.cache);
    kcrit = compute_constants({-1, 1, 6, 1}, o.cache);

    SweepSpec s;
    s.threads = o.threads;
    s.cache = o.cache;
    s.params = {1, 1, 4, 1};
    s.solver = cfg4;
    sweep4 = run_sweep(s);
    s.params = {1, 1, 6, 1};
    s.solver = cfg6;
    s.continuity = false;
    sweep6 = run_sweep(s);
    s.params = {1, -1, 5, 1};
    s.solver = cfg4;
    s.c_lo = 0.25;
    s.c_hi = 8.0;
    sweep_global = run_sweep(s);

    const ProblemParams half{1, 1, 4, 0.5 * k4.c1};
    plus_half = solve_plus(half, k4, cfg4);
    minus_half = solve_minus(half, k4, cfg4);

    probe_monotone = nonexistence_probe({-1, -1, 4, 1}, compute_constants({-1, -1, 4, 1}, o.cache),
                                        100, cfg4);
    probe_crit = nonexistence_probe({-1, 1, 6, 1}, kcrit, 6, cfg4);
  }

  // Every solution produced above, with a label.
  template <class F>
  void each_solution(F&& f) const {
    auto sweep = [&](const SweepReport& r, const char* tag) {
      for (const auto& p : r.points) {
        if (r.two_branch) {
          f(std::string(tag) + " plus c=" + fmt(p.c), p.plus);
          f(std::string(tag) + " minus c=" + fmt(p.c), p.minus);
        } else {
          f(std::string(tag) + " c=" + fmt(p.c), p.global);
        }
      }
    };
    sweep(sweep4, "p4");
    sweep(sweep6, "p6");
    sweep(sweep_global, "global");
    f("p4 plus c1/2", summarize(plus_half));
    f("p4 minus c1/2", summarize(minus_half));
  }
};

Outcome c1_pohozaev(const Context& cx) {
  std::size_t count = 0, failed = 0;
  double worst_q = 0.0, worst_res = 0.0;
  std::string first_bad;
  cx.each_solution([&](const std::string& label, const BranchSummary& s) {
    if (!s.ok) {
      ++failed;
      if (first_bad.empty()) first_bad = label + " did not converge (" + s.error + ")";
      return;
    }
    ++count;
    worst_q = std::max(worst_q, s.q_rel);
    worst_res = std::max(worst_res, s.residual);
  });
  Outcome o{1, "euler-lagrange and pohozaev residuals"};
  o.pass = count > 0 && worst_q <= kTol && worst_res <= kTol;
  o.detail = std::to_string(count) + " converged solutions, max q_rel=" + fmt(worst_q) +
             ", max equation residual=" + fmt(worst_res);
  if (failed) o.detail += "; " + std::to_string(failed) + " unconverged, e.g. " + first_bad;
  return o;
}

Outcome c2_signs(const Context& cx) {
  std::size_t count = 0, bad = 0;
  cx.each_solution([&](const std::string&, const BranchSummary& s) {
    if (!s.ok) return;
    ++count;
    if (!(s.lambda > 0.0 && s.lambda_direct > 0.0)) ++bad;
  });
  double worst_neg = -std::numeric_limits<double>::infinity();
  for (const auto& t : cx.probe_crit.trials)
    worst_neg = std::max({worst_neg, t.lambda, t.lambda_direct});
  Outcome o{2, "multiplier signs"};
  o.pass = count > 0 && bad == 0 && cx.probe_crit.lambda_negative && !cx.probe_crit.trials.empty();
  o.detail = std::to_string(count - bad) + "/" + std::to_string(count) +
             " gamma>0 solutions with lambda>0; gamma<0 p=6 candidates max lambda=" + fmt(worst_neg);
  return o;
}

Outcome c3_two_branch(const Context& cx) {
  const auto& up = cx.plus_half;
  const auto& um = cx.minus_half;
  Outcome o{3, "two branches at c1/2"};
  o.pass = up.converged && um.converged && up.energy < 0.0 && um.energy > 0.0 &&
           up.e.A < cx.k4.k1 && um.e.A > cx.k4.k1;
  o.detail = "F+=" + fmt(up.energy) + " F-=" + fmt(um.energy) + " A+=" + fmt(up.e.A) +
             " k1=" + fmt(cx.k4.k1) + " A-=" + fmt(um.e.A);
  return o;
}

Outcome c4_scaling(const Context& cx) {
  const auto& r = cx.sweep4;
  bool all_ok = true;
  for (const auto& p : r.points) all_ok = all_ok && p.plus.ok && p.minus.ok;
  const double lm = r.lambda_minus_fit.slope;
  Outcome o{4, "small-mass scaling laws (p=4)"};
  // c^2 and c^3 upper bounds as c -> 0 need slopes no flatter than 2 and 3.
  o.pass = all_ok && std::abs(lm + 2.0) <= 0.3 && !r.lambda_minus_fit.flagged &&
           r.lambda_plus_fit.slope >= 2.0 - 0.3 && r.gamma_plus_fit.slope >= 3.0 - 0.3 &&
           std::isfinite(r.K_lambda_plus) && std::isfinite(r.K_gamma_plus);
  o.detail = "lambda- slope=" + fmt(lm) + " (resid " + fmt(r.lambda_minus_fit.residual) +
             "), lambda+ slope=" + fmt(r.lambda_plus_fit.slope) + " K=" + fmt(r.K_lambda_plus) +
             ", |gamma+| slope=" + fmt(r.gamma_plus_fit.slope) + " K=" + fmt(r.K_gamma_plus);
  return o;
}

Outcome c5_critical(const Context& cx) {
  const auto& r = cx.sweep6;
  Outcome o{5, "critical limit (p=6)"};
  const bool ok = r.points.front().minus.ok;
  o.pass = ok && r.crit_gap <= 0.05 && std::isfinite(r.K_lambda_minus) && r.K_lambda_minus > 0.0 &&
           r.lambda_minus_fit.slope >= 0.5 - 0.2;
  o.detail = "gamma-(c_min)=" + fmt(r.gamma_minus_smallest) + " crit=" +
             fmt(cx.k6.crit_level.value_or(NAN)) + " gap=" + fmt(r.crit_gap) +
             ", K1=" + fmt(r.K_lambda_minus) + ", lambda- slope=" + fmt(r.lambda_minus_fit.slope);
  return o;
}

Outcome c6_interaction(const Context& cx) {
  Outcome o{6, "strict interaction inequality (p=6)"};
  const ProblemParams prm{1, 1, 6, 0.8 * cx.k6.c1};
  const BranchResult up = solve_plus(prm, cx.k6, cx.cfg6);
  const BranchResult um = solve_minus(prm, cx.k6, cx.cfg6);
  const InteractionStudy st = interaction_study(prm, up.u, *cx.k6.crit_level, {0.05, 0.025, 0.0125});
  bool positive = true, checks = true;
  double min_sup = std::numeric_limits<double>::infinity();
  std::string margins;
  for (const auto& r : st.rows) {
    positive = positive && r.margin > 0.0;
    checks = checks && r.cross_term_ok && r.tail_below_half && r.max_mass_error <= 1e-8;
    min_sup = std::min(min_sup, r.sup_F);
    margins += (margins.empty() ? "" : ",") + fmt(r.margin);
  }
  const double slope = st.margin_fit.slope;
  const bool below = um.energy <= min_sup + 1e-6 * std::abs(min_sup);
  o.pass = up.converged && um.converged && positive && checks && below &&
           std::abs(slope - 0.5) <= 0.2;
  o.detail = "c=0.8 c1, margins(eps=.05,.025,.0125)=" + margins + ", exponent=" + fmt(slope) +
             ", gamma-=" + fmt(um.energy) + " <= min sup=" + fmt(min_sup) +
             (checks ? "" : ", quadrature checks failed");
  return o;
}

Outcome c7_monotone(const Context& cx) {
  Outcome o{7, "gamma- monotone, gamma+ continuous"};
  const auto& cc = cx.sweep4.continuity;
  o.pass = cx.sweep4.gamma_minus_monotone && cc.pass;
  std::string diffs;
  for (double d : cc.diffs) diffs += (diffs.empty() ? "" : ",") + fmt(d);
  std::size_t dec = 0;
  for (bool b : cx.sweep4.gamma_minus_decreasing) dec += b;
  o.detail = std::to_string(dec) + "/" + std::to_string(cx.sweep4.gamma_minus_decreasing.size()) +
             " adjacent pairs decreasing; |dgamma+| under halving delta=" + diffs;
  return o;
}

Outcome c8_nonexistence(const Context& cx) {
  const auto& m = cx.probe_monotone;
  const auto& k = cx.probe_crit;
  Outcome o{8, "non-existence probes"};
  o.pass = m.monotone && m.profiles == 100 && m.t_points == 100 && k.above_threshold;
  o.detail = "(-1,-1,4) min g'/sqrt(A)=" + fmt(m.min_dg) + " over " + std::to_string(m.profiles) +
             "x" + std::to_string(m.t_points) + "; (-1,1,6) min energy=" + fmt(k.min_energy) +
             " vs 0.95 crit=" + fmt(0.95 * k.crit_level);
  return o;
}

Outcome c9_global(const Context& cx) {
  const auto& r = cx.sweep_global;
  bool all_ok = true;
  for (const auto& p : r.points) all_ok = all_ok && p.global.ok;
  Outcome o{9, "global branch (1,-1,5)"};
  o.pass = all_ok && r.m_negative && r.lambda_positive && std::isfinite(r.K1) &&
           std::isfinite(r.K2) && r.explicit_bound;
  o.detail = "m<0:" + std::string(r.m_negative ? "yes" : "no") +
             " lambda>0:" + std::string(r.lambda_positive ? "yes" : "no") + " K1=" + fmt(r.K1) +
             " K2=" + fmt(r.K2) + " K3=" + fmt(r.K3) +
             " explicit c^3 bound:" + (r.explicit_bound ? "yes" : "no");
  return o;
}

Outcome c10_oracles(const Context& cx) {
  Outcome o{10, "oracle equivalences"};
  // Hartree energy against the O(n^2) shell sum.
  const GridPtr g128 = make_grid(128, 12.0);
  double poisson = 0.0;
  for (std::uint64_t s = 1; s <= 5; ++s) {
    const RadialFunction u = random_profile(g128, 1.0, s);
    const double b = energy_breakdown(u, {1, 1, 4, 1}).B;
    poisson = std::max(poisson, std::abs(b / oracle::hartree_double_sum(u) - 1.0));
  }
  // Gradient against central differences.
  const GridPtr g = make_grid(cx.opt.n, 20.0);
  double grad = 0.0;
  for (std::uint64_t s = 1; s <= 20; ++s) {
    const RadialFunction u = random_profile(g, 2.0, 100 + s);
    const RadialFunction v = random_profile(g, 1.0, 200 + s, true);
    grad = std::max(grad, oracle::gradient_fd_error(u, v, {1, 1, 4, 1}));
  }
  // I- against a dense scan of the fiber.
  double fiber = 0.0;
  for (std::uint64_t s = 1; s <= 20; ++s) {
    const ProblemParams prm{1, 1, 4, 0.5 * cx.k4.c1};
    const RadialFunction u = random_profile(g, prm.c, 300 + s);
    try {
      const FiberProfile f = fiber_profile(u, prm);
      const double scan = oracle::dense_fiber_max(f.A, f.B, f.C, prm, f.t_star, 100.0 * f.t_star);
      fiber = std::max(fiber, std::abs(reduced_I(f, FiberBranch::minus) / scan - 1.0));
    } catch (const DegenerateFiber&) {
    }
  }
  // Sharp constants: saturation by the maximizers, no random profile above.
  ConstantsOptions co;
  co.check_refinement = false;
  co.n = cx.opt.n;
  const SharpResult kh = sharp_kh(co);
  double sat = std::abs(hartree_quotient(kh.maximizer) / cx.k4.K_H - 1.0);
  bool below = true;
  for (double p : {4.0, 5.0, 6.0}) {
    const SharpResult kg = sharp_kgn(p, co);
    const double ref = p == 4.0 ? cx.k4.K_GN : p == 6.0 ? cx.k6.K_GN : cx.k5g.K_GN;
    sat = std::max(sat, std::abs(gn_quotient(kg.maximizer, p) / ref - 1.0));
    for (std::uint64_t s = 1; s <= 50; ++s)
      below = below && gn_quotient(random_profile(g, 1.0, 400 + s), p) <= ref * (1 + 1e-9);
  }
  for (std::uint64_t s = 1; s <= 50; ++s)
    below = below && hartree_quotient(random_profile(g, 1.0, 500 + s)) <= cx.k4.K_H * (1 + 1e-9);
  o.pass = poisson <= 1e-3 && grad <= 1e-4 && fiber <= 1e-6 && sat <= 1e-3 && below;
  o.detail = "poisson=" + fmt(poisson) + " gradient=" + fmt(grad) + " fiber=" + fmt(fiber) +
             " saturation=" + fmt(sat) + " random profiles below constants:" + (below ? "yes" : "no");
  return o;
}

Outcome c11_bubbles(const Context& cx) {
  Outcome o{11, "bubble expansions"};
  const BubbleEstimates b =
      verify_bubble_estimates({0.1, 0.05, 0.025, 0.0125}, make_grid(cx.opt.n_crit, 2.5));
  const double target = std::sqrt(1.0 / cx.k6.K_GN);
  const double ea = std::abs(b.A_limit / target - 1.0), ec = std::abs(b.C_limit / target - 1.0);
  o.pass = std::abs(b.q2.slope - 1.0) <= 0.05 && std::abs(b.q5.slope - 0.5) <= 0.05 &&
           std::abs(b.q3_log.slope - 1.0) <= 0.1 && ea <= 0.01 && ec <= 0.01;
  o.detail = "q2 slope=" + fmt(b.q2.slope) + " q5 slope=" + fmt(b.q5.slope) +
             " q3 log-slope=" + fmt(b.q3_log.slope) + " A limit err=" + fmt(ea) +
             " C limit err=" + fmt(ec);
  return o;
}

}  // namespace

std::vector<Outcome> run_all(const Options& opt, std::ostream& out) {
  std::vector<Outcome> results;
  auto report = [&](Outcome o) {
    out << (o.pass ? "PASS " : "FAIL ") << o.id << " " << o.name << ": " << o.detail << std::endl;
    results.push_back(std::move(o));
  };
  std::unique_ptr<Context> cx;
  try {
    cx = std::make_unique<Context>(opt);
  } catch (const std::exception& e) {
    for (int id = 1; id <= 11; ++id)
      report(Outcome{id, "setup", false, std::string("shared solves failed: ") + e.what()});
    return results;
  }
  const std::vector<std::function<Outcome(const Context&)>> checks = {
      c1_pohozaev, c2_signs,        c3_two_branch, c4_scaling,  c5_critical, c6_interaction,
      c7_monotone, c8_nonexistence, c9_global,     c10_oracles, c11_bubbles};
  for (std::size_t i = 0; i < checks.size(); ++i) {
    try {
      report(checks[i](*cx));
    } catch (const std::exception& e) {
      report(Outcome{static_cast<int>(i + 1), "criterion", false, std::string("threw: ") + e.what()});
    }
  }
  return results;
}

}  // namespace acceptance
