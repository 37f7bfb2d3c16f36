#include <chrono>
#include <cmath>
#include <cstdio>

#include "sps/descent.hpp"
#include "sps/errors.hpp"

namespace sps {

namespace {

std::string fmt_sci(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.3e", x);
  return buf;
}

RadialFunction project(const DescentState& st, double c) {
  RadialFunction v = st.s == 1.0 ? st.u : rescale_fiber(st.u, st.s);
  v.normalize_mass(c);
  return v;
}

}  // namespace

RelaxResult relax(RadialFunction u0, const ProblemParams& prm, DescentTarget target,
                  const RelaxOptions& opt) {
  using clock = std::chrono::steady_clock;
  const auto start = clock::now();
  auto remaining = [&] {
    return opt.max_seconds - std::chrono::duration<double>(clock::now() - start).count();
  };

  DescentOptions dopt;
  dopt.tol_grad = opt.coarse_tol;
  dopt.tol_energy = 1e-9;
  dopt.max_iter = opt.max_iter;
  dopt.a_ceiling = opt.a_ceiling;
  dopt.bubble_ceiling = opt.bubble_ceiling;
  dopt.verbose = opt.verbose > 1 ? 1 : 0;

  RelaxResult out;
  RadialFunction u = std::move(u0);
  DescentState st;
  for (int round = 0;; ++round) {
    dopt.max_seconds = std::max(remaining(), 1.0);
    st = descend(u, prm, target, dopt);
    out.iterations += st.iterations;
    if (!opt.adapt_domain || !(st.lambda > 0.0) || round >= 4) break;
    const double R = st.u.grid().r_max;
    const double R_target = std::min(opt.decay_lengths / std::sqrt(st.lambda), opt.r_cap);
    if (R_target > 0.6 * R && R_target < 1.7 * R) break;
    if (opt.verbose)
      std::fprintf(stderr, "relax: lambda=%.4g, moving domain R=%.4g -> %.4g\n", st.lambda, R,
                   R_target);
    const RadialFunction v = project(st, prm.c);
    u = dilate(v, make_grid(opt.n, R_target, opt.spacing), 1.0, 1.0);
    u.normalize_mass(prm.c);
    ++out.regrids;
  }

  out.u = project(st, prm.c);
  out.lambda = st.lambda;
  out.grad_rel = st.grad_rel;
  out.energy_change = 0.0;
  out.stop_reason = st.stop_reason;

  for (int stage = 0; stage < 2 && opt.polish; ++stage) {
    const PolishResult pr = newton_polish(out.u, lagrange_multiplier(out.u, prm), prm);
    out.iterations += pr.newton_iterations;
    if (pr.improved) {
      out.u = pr.u;
      out.lambda = pr.lambda;
      out.grad_rel = pr.grad_rel;
      out.energy_change = pr.energy_change;
    }
    if (opt.verbose)
      std::fprintf(stderr, "relax: newton %d steps, grad_rel=%.3e\n", pr.newton_iterations,
                   out.grad_rel);
    if (out.grad_rel <= opt.tol_grad || stage == 1) break;
    // Newton stalled away from tolerance: tighten the flow and try once more.
    DescentOptions fine = dopt;
    fine.tol_grad = opt.tol_grad;
    fine.tol_energy = opt.tol_energy;
    fine.max_seconds = std::max(remaining(), 1.0);
    st = descend(out.u, prm, target, fine);
    out.iterations += st.iterations;
    out.u = project(st, prm.c);
    out.lambda = st.lambda;
    out.grad_rel = st.grad_rel;
  }
  if (!opt.polish && out.grad_rel > opt.tol_grad) {
    DescentOptions fine = dopt;
    fine.tol_grad = opt.tol_grad;
    fine.tol_energy = opt.tol_energy;
    fine.max_seconds = std::max(remaining(), 1.0);
    st = descend(out.u, prm, target, fine);
    out.iterations += st.iterations;
    out.u = project(st, prm.c);
    out.lambda = st.lambda;
    out.grad_rel = st.grad_rel;
  }
  if (out.grad_rel <= opt.tol_grad) {
    // Energy stationarity: decrease achieved by one more preconditioned flow step.
    DescentOptions probe = dopt;
    probe.tol_grad = 0.0;
    probe.max_iter = 1;
    probe.throw_on_failure = false;
    const DescentState ps = descend(out.u, prm, target, probe);
    probe.max_iter = 0;
    const DescentState p0 = descend(out.u, prm, target, probe);
    out.energy_change = std::abs(p0.energy - ps.energy) / (std::abs(p0.energy) + p0.e.A);
  }
  out.converged = out.grad_rel <= opt.tol_grad && out.energy_change <= opt.tol_energy;
  if (!out.converged) {
    out.stop_reason = "residual above tolerance after flow and Newton stages";
    throw NonConvergence("relax: grad_rel = " + fmt_sci(out.grad_rel) +
                         ", energy change = " + fmt_sci(out.energy_change));
  }
  out.stop_reason = "converged";
  return out;
}

}  // namespace sps
