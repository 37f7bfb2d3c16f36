#include "sps/descent.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <numbers>

#include "sps/errors.hpp"
#include "sps/simd.hpp"

namespace sps {

namespace {

struct Level {
  EnergyBreakdown e;
  double s = 1.0;
  double energy = 0.0;
};

// Energy of the target at u; false when the fiber root does not exist.
bool evaluate(const RadialFunction& u, const ProblemParams& prm, DescentTarget target,
              Level& out) {
  out.e = energy_breakdown(u, prm);
  if (target == DescentTarget::energy) {
    out.s = 1.0;
    out.energy = out.e.F;
    return true;
  }
  try {
    const FiberProfile f = fiber_profile(out.e, prm);
    out.s = target == DescentTarget::fiber_plus ? f.s_plus : f.s_minus;
    if (!std::isfinite(out.s)) return false;
    out.energy = f.g(out.s);
    return true;
  } catch (const DegenerateFiber&) {
    return false;
  }
}

// Solves (s2 L + mu) x = b where L is the conservative three-point radial
// Laplacian with zero flux at the origin and x = 0 at the outer node.
std::vector<double> precondition(const RadialGrid& g, const std::vector<double>& b, double s2,
                                 double mu) {
  const std::size_t n = g.n;
  const std::size_t m = n - 1;  // unknowns; the last node is pinned
  std::vector<double> lo(m, 0.0), di(m, 0.0), up(m, 0.0), rhs(m);
  auto face = [&](std::size_t i) { return 0.5 * (g.r[i] + g.r[i + 1]); };
  for (std::size_t i = 0; i < m; ++i) {
    const double fl = i == 0 ? 0.0 : face(i - 1);
    const double fr = face(i);
    const double vol = (fr * fr * fr - fl * fl * fl) / 3.0;
    const double kr = s2 * fr * fr / (g.r[i + 1] - g.r[i]);
    const double kl = i == 0 ? 0.0 : s2 * fl * fl / (g.r[i] - g.r[i - 1]);
    di[i] = kl + kr + mu * vol;
    if (i > 0) lo[i] = -kl;
    if (i + 1 < m) up[i] = -kr;
    rhs[i] = b[i] * vol;
  }
  for (std::size_t i = 1; i < m; ++i) {
    const double f = lo[i] / di[i - 1];
    di[i] -= f * up[i - 1];
    rhs[i] -= f * rhs[i - 1];
  }
  std::vector<double> x(n, 0.0);
  x[m - 1] = rhs[m - 1] / di[m - 1];
  for (std::size_t i = m - 1; i-- > 0;) x[i] = (rhs[i] - up[i] * x[i + 1]) / di[i];
  return x;
}

}  // namespace

DescentState descend(RadialFunction u0, const ProblemParams& prm, DescentTarget target,
                     const DescentOptions& opt) {
  using clock = std::chrono::steady_clock;
  const auto start = clock::now();
  const RadialGrid& grid = u0.grid();
  const std::size_t n = grid.n;
  const double c = prm.c;
  const auto& kern = simd::active();
  constexpr double kFourPi = 4.0 * std::numbers::pi;

  DescentState st;
  st.u = std::move(u0);
  st.u.normalize_mass(c);
  Level cur;
  if (!evaluate(st.u, prm, target, cur))
    throw DegenerateFiber("descend: initial profile has no fiber root of the requested type");

  double tau = opt.tau0;
  double last_decrease = std::numeric_limits<double>::infinity();
  const double mu_floor = std::pow(std::numbers::pi / grid.r_max, 2);
  std::vector<double> prev_dir, prev_pr;
  double prev_rpr = 0.0;
  int restart_at = 0;

  auto fail = [&](auto exc, const std::string& why) {
    st.stop_reason = why;
    if (opt.throw_on_failure) throw decltype(exc)(why);
  };

  for (int it = 0;; ++it) {
    st.e = cur.e;
    st.s = cur.s;
    st.energy = cur.energy;
    st.min_energy = std::min(st.min_energy, cur.energy);
    st.iterations = it;

    const double s = cur.s, sig = prm.sigma();
    const RadialFunction G = weighted_gradient(st.u, prm, s * s, s, std::pow(s, sig));
    const auto& gv = G.values();
    const auto& uv = st.u.values();
    const double D = st.u.mass();
    const double lambda = -kFourPi * kern.wdot(grid.w.data(), gv.data(), uv.data(), n) / D;
    std::vector<double> res(gv);
    kern.axpy(lambda, uv.data(), res.data(), n);
    res.back() = 0.0;
    const double rnorm = std::sqrt(kFourPi * kern.wdot(grid.w.data(), res.data(), res.data(), n));
    st.lambda = lambda;
    st.grad_rel = rnorm / (std::abs(lambda) * std::sqrt(D));

    const double scaleE = std::abs(cur.energy) + 1e-6 * s * s * cur.e.A;
    if (opt.verbose > 1 || (opt.verbose > 0 && it % 200 == 0))
      std::fprintf(stderr, "  it %5d E=%.15g A=%.6g s=%.12f lam=%.6g grad=%.3e tau=%.3g\n", it,
                   cur.energy, cur.e.A, s, lambda, st.grad_rel, tau);

    if (st.grad_rel < opt.tol_grad && last_decrease < opt.tol_energy * scaleE) {
      st.converged = true;
      st.stop_reason = "converged";
      return st;
    }
    if (s * s * cur.e.A >= opt.a_ceiling) {
      fail(BoundaryStall(""), "iterate reached A >= k1");
      return st;
    }
    if (s * s * cur.e.A >= opt.bubble_ceiling) {
      fail(BubbleEscape(""), "kinetic energy exceeded the concentration ceiling");
      return st;
    }
    if (it >= opt.max_iter) {
      fail(NonConvergence(""), "iteration limit reached");
      return st;
    }
    if (std::chrono::duration<double>(clock::now() - start).count() > opt.max_seconds) {
      fail(NonConvergence(""), "time limit reached");
      return st;
    }

    const double mu = std::max(std::abs(lambda), s * s * mu_floor);
    std::vector<double> pr = precondition(grid, res, s * s, mu);
    const double rpr = kFourPi * kern.wdot(grid.w.data(), res.data(), pr.data(), n);
    // Polak-Ribiere+ conjugate direction in the preconditioned metric.
    double beta = 0.0;
    if (!prev_dir.empty() && prev_rpr > 0.0 && it - restart_at < 200) {
      double num = rpr;
      num -= kFourPi * kern.wdot(grid.w.data(), res.data(), prev_pr.data(), n);
      beta = std::max(0.0, num / prev_rpr);
    }
    std::vector<double> d(pr);
    if (beta > 0.0) kern.axpy(beta, prev_dir.data(), d.data(), n);
    double du = kFourPi * kern.wdot(grid.w.data(), d.data(), uv.data(), n) / D;
    kern.axpy(-du, uv.data(), d.data(), n);
    d.back() = 0.0;
    if (kFourPi * kern.wdot(grid.w.data(), d.data(), res.data(), n) <= 0.0) {
      d = pr;
      du = kFourPi * kern.wdot(grid.w.data(), d.data(), uv.data(), n) / D;
      kern.axpy(-du, uv.data(), d.data(), n);
      d.back() = 0.0;
      restart_at = it;
    }

    const double noise = 1e-14 * (std::abs(cur.energy) + s * s * cur.e.A);
    bool accepted = false;
    for (int ls = 0; ls < 60; ++ls) {
      std::vector<double> trial(uv);
      kern.axpy(-tau, d.data(), trial.data(), n);
      RadialFunction cand(st.u.grid_ptr(), std::move(trial));
      cand.normalize_mass(c);
      Level next;
      if (evaluate(cand, prm, target, next) && next.energy <= cur.energy + noise) {
        last_decrease = std::abs(cur.energy - next.energy);
        st.u = std::move(cand);
        cur = next;
        tau = std::min(1.5 * tau, opt.tau_max);
        accepted = true;
        break;
      }
      tau *= 0.5;
    }
    prev_dir = std::move(d);
    prev_pr = std::move(pr);
    prev_rpr = rpr;
    if (accepted && target != DescentTarget::energy && std::abs(std::log(cur.s)) > 0.2) {
      // Keep the iterate at the scale of its projection; I(u^t) = I(u).
      st.u = rescale_fiber(st.u, cur.s);
      st.u.normalize_mass(c);
      if (!evaluate(st.u, prm, target, cur)) throw DegenerateFiber("descend: lost fiber root");
      prev_dir.clear();
      restart_at = it;
    }
    if (!accepted && restart_at != it) {
      prev_dir.clear();
      restart_at = it;
      continue;
    }
    if (!accepted) {
      if (st.grad_rel < opt.tol_grad) {
        st.converged = true;
        st.stop_reason = "converged (line search at noise floor)";
        return st;
      }
      fail(NonConvergence(""), "line search failed");
      return st;
    }
  }
}

}  // namespace sps
