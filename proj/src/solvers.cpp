#include "sps/solvers.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "sps/bubbles.hpp"
#include "sps/descent.hpp"
#include "sps/errors.hpp"

namespace sps {

const char* to_string(Branch b) {
  switch (b) {
    case Branch::PlusLocalMin: return "PlusLocalMin";
    case Branch::MinusMountainPass: return "MinusMountainPass";
    case Branch::GlobalMin: return "GlobalMin";
  }
  return "?";
}

namespace {

RelaxOptions relax_options(const SolverConfig& cfg) {
  RelaxOptions ro;
  ro.n = cfg.n;
  ro.spacing = cfg.spacing;
  ro.tol_grad = cfg.tol_grad;
  ro.tol_energy = cfg.tol_energy;
  ro.max_iter = cfg.max_iter;
  ro.max_seconds = cfg.max_seconds;
  ro.adapt_domain = cfg.adapt_domain;
  ro.verbose = cfg.verbose;
  return ro;
}

RadialFunction gaussian(const SolverConfig& cfg, double width, double mass) {
  auto grid = make_grid(cfg.n, cfg.r_max, cfg.spacing);
  auto u = RadialFunction::sample(grid, [&](double r) { return std::exp(-r * r / (width * width)); });
  u.normalize_mass(mass);
  return u;
}

void require_pair_regime(const ProblemParams& prm, const char* who) {
  prm.validate();
  if (!(prm.gamma > 0.0 && prm.a > 0.0))
    throw std::invalid_argument(std::string(who) + ": needs gamma > 0 and a > 0");
}

BranchResult finish(const RelaxResult& rr, const ProblemParams& prm, Branch branch) {
  BranchResult r = diagnose(rr.u, prm, branch);
  r.grad_rel = rr.grad_rel;
  r.energy_change = rr.energy_change;
  r.iterations = rr.iterations;
  r.converged = rr.converged && r.q_rel <= 1e-5 && r.grad_rel <= 1e-6;
  return r;
}

}  // namespace

BranchResult diagnose(RadialFunction u, const ProblemParams& prm, Branch branch) {
  // Ground states are defined up to sign; report the positive one.
  double sum = 0.0;
  for (double v : u.values()) sum += v;
  if (sum < 0.0) u.scale(-1.0);

  BranchResult r;
  r.branch = branch;
  r.e = energy_breakdown(u, prm);
  r.energy = r.e.F;
  r.lambda = lagrange_multiplier(r.e, prm, MultiplierForm::pohozaev);
  r.lambda_direct = lagrange_multiplier(r.e, prm, MultiplierForm::direct);
  const PohozaevResidual ph = pohozaev_residual(r.e, r.lambda_direct, prm);
  r.q_rel = ph.q_rel;
  r.eq_rel = ph.eq_rel;
  r.residual = equation_residual(u, r.lambda_direct, prm);
  r.min_interior = *std::min_element(u.values().begin(), u.values().end() - 1);
  try {
    r.classification = fiber_profile(r.e, prm).classification;
  } catch (const SolverError&) {
    r.classification = FiberClass::NotOnLambda;
  }
  r.u = std::move(u);
  return r;
}

BranchResult solve_plus(const ProblemParams& prm, const SharpConstants& consts,
                        const SolverConfig& cfg, const std::optional<RadialFunction>& init) {
  require_pair_regime(prm, "solve_plus");
  RadialFunction u0;
  if (init) {
    u0 = *init;
    u0.normalize_mass(prm.c);
  } else {
    // Gaussian of mass c has A = 3c / w^2; pick A(u0) = k1 / 4.
    u0 = gaussian(cfg, std::sqrt(12.0 * prm.c / consts.k1), prm.c);
  }
  RelaxOptions ro = relax_options(cfg);
  ro.a_ceiling = consts.k1;
  const RelaxResult rr = relax(std::move(u0), prm, DescentTarget::energy, ro);
  BranchResult r = finish(rr, prm, Branch::PlusLocalMin);
  if (r.e.A >= consts.k1) throw BoundaryStall("solve_plus: converged profile has A >= k1");
  return r;
}

BranchResult solve_minus(const ProblemParams& prm, const SharpConstants& consts,
                         const SolverConfig& cfg, const std::optional<RadialFunction>& init) {
  require_pair_regime(prm, "solve_minus");
  RadialFunction u0;
  if (init) {
    u0 = *init;
    u0.normalize_mass(prm.c);
  } else {
    const BranchResult plus = solve_plus(prm, consts, cfg);
    const double s = fiber_profile(plus.e, prm).s_minus;
    // Dilate onto a domain shrunk by s (so the profile keeps its resolution),
    // but no smaller than the configured one: the minus tail decays slower.
    auto grid = make_grid(cfg.n, std::max(plus.u.grid().r_max / s, cfg.r_max), cfg.spacing);
    u0 = dilate(plus.u, grid, s, s * std::sqrt(s));
    u0.normalize_mass(prm.c);
  }
  RelaxOptions ro = relax_options(cfg);
  ro.bubble_ceiling = 1e3 * consts.k1;
  const RelaxResult rr = relax(std::move(u0), prm, DescentTarget::fiber_minus, ro);
  BranchResult r = finish(rr, prm, Branch::MinusMountainPass);
  if (r.classification != FiberClass::LambdaMinus)
    throw NonConvergence(std::string("solve_minus: result classified ") +
                         to_string(r.classification));
  return r;
}

BranchResult solve_global(const ProblemParams& prm, const SolverConfig& cfg,
                          const std::optional<RadialFunction>& init) {
  prm.validate();
  if (!(prm.gamma > 0.0 && prm.a < 0.0))
    throw std::invalid_argument("solve_global: needs gamma > 0 and a < 0");
  RadialFunction u0 = init ? *init : gaussian(cfg, 1.0, prm.c);
  u0.normalize_mass(prm.c);
  const RelaxResult rr = relax(std::move(u0), prm, DescentTarget::energy, relax_options(cfg));
  return finish(rr, prm, Branch::GlobalMin);
}

NonexistenceReport nonexistence_probe(const ProblemParams& prm, const SharpConstants& consts,
                                      std::size_t trials, const SolverConfig& cfg,
                                      std::uint64_t seed) {
  prm.validate();
  NonexistenceReport rep;
  if (prm.gamma < 0.0 && prm.a < 0.0) {
    rep.regime = "monotone";
    rep.profiles = trials;
    rep.t_points = 100;
    const LambdaZeroReport lz =
        lambda_zero_probe(prm, trials, make_grid(cfg.n, cfg.r_max, cfg.spacing), seed, 100);
    rep.min_dg = lz.min_ratio;
    rep.monotone = lz.all_positive;
    return rep;
  }
  if (!(prm.gamma < 0.0 && prm.a > 0.0 && prm.p == 6.0))
    throw std::invalid_argument("nonexistence_probe: needs gamma, a < 0 or gamma < 0 < a, p = 6");
  if (!consts.crit_level) throw std::invalid_argument("nonexistence_probe: missing critical level");
  rep.regime = "critical";
  rep.crit_level = *consts.crit_level;
  rep.min_energy = std::numeric_limits<double>::infinity();
  rep.lambda_negative = true;

  auto grid = make_grid(cfg.n, std::max(cfg.r_max, 2.0), cfg.spacing);
  auto run = [&](const GridPtr& g, double eps, NonexistenceTrial& t) {
    // Bubble plus a broad Gaussian carrying the remaining mass.
    auto u = RadialFunction::sample(g, [&](double r) {
      return bubble_value(eps, r) + 0.3 * std::exp(-r * r / 4.0);
    });
    u.normalize_mass(prm.c);
    DescentOptions o;
    o.max_iter = 400;
    o.max_seconds = std::min(cfg.max_seconds, 20.0);
    o.tol_grad = cfg.tol_grad;
    o.throw_on_failure = false;
    const DescentState st = descend(u, prm, DescentTarget::fiber_minus, o);
    const RadialFunction v = rescale_fiber(st.u, st.s);
    const EnergyBreakdown e = energy_breakdown(v, prm);
    t.epsilon = eps;
    t.min_energy = st.min_energy;
    t.final_energy = st.energy;
    t.lambda = lagrange_multiplier(e, prm, MultiplierForm::pohozaev);
    t.lambda_direct = lagrange_multiplier(e, prm, MultiplierForm::direct);
    t.grad_rel = st.grad_rel;
    t.peak_A = e.A;
    t.iterations = st.iterations;
    t.stop_reason = st.stop_reason;
  };

  std::size_t best = 0;
  for (std::size_t k = 0; k < trials; ++k) {
    // Seeds log-spaced from 0.3 down to the grid resolution limit.
    const double frac = trials > 1 ? static_cast<double>(k) / static_cast<double>(trials - 1) : 0.0;
    double eps = 0.3 * std::pow(0.02 / 0.3, frac);
    while (nodes_below(*grid, eps) < 8) eps *= 1.5;
    NonexistenceTrial t;
    run(grid, eps, t);
    rep.lambda_negative = rep.lambda_negative && t.lambda < 0.0 && t.lambda_direct < 0.0;
    if (t.min_energy < rep.min_energy) {
      rep.min_energy = t.min_energy;
      best = k;
    }
    rep.trials.push_back(t);
  }
  rep.above_threshold = rep.min_energy >= 0.95 * rep.crit_level;
  if (!rep.trials.empty()) {
    for (std::size_t m : {cfg.n, 2 * cfg.n}) {
      NonexistenceTrial t;
      run(make_grid(m, grid->r_max, cfg.spacing), rep.trials[best].epsilon, t);
      rep.refinement_n.push_back(static_cast<double>(m));
      rep.refinement_energy.push_back(t.min_energy);
    }
  }
  return rep;
}

}  // namespace sps
