#include "sps/bubbles.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>

#include "sps/errors.hpp"

namespace sps {

namespace {

constexpr double kFourPi = 4.0 * std::numbers::pi;

double lq(const RadialFunction& u, double q) { return lp_power(u, q); }

}  // namespace

double bubble_cutoff(double r) {
  if (r <= 1.0) return 1.0;
  if (r >= 2.0) return 0.0;
  const double x = r - 1.0;
  return 1.0 - x * x * x * (10.0 - 15.0 * x + 6.0 * x * x);
}

double bubble_value(double epsilon, double r) {
  return bubble_cutoff(r) * std::pow(3.0 * epsilon * epsilon, 0.25) /
         std::sqrt(epsilon * epsilon + r * r);
}

std::size_t nodes_below(const RadialGrid& g, double radius) {
  return static_cast<std::size_t>(std::lower_bound(g.r.begin(), g.r.end(), radius) - g.r.begin());
}

Bubble make_bubble(double epsilon, const GridPtr& grid) {
  if (!(epsilon >= 1e-3 && epsilon <= 1.0))
    throw std::invalid_argument("make_bubble: epsilon must lie in [1e-3, 1]");
  if (grid->r_max < 2.0) throw std::invalid_argument("make_bubble: grid must reach r = 2");
  if (nodes_below(*grid, epsilon) < 8)
    throw UnderResolved("make_bubble: fewer than 8 nodes below epsilon = " +
                        std::to_string(epsilon));
  Bubble b;
  b.epsilon = epsilon;
  b.u = RadialFunction::sample(grid, [&](double r) { return bubble_value(epsilon, r); });
  return b;
}

BubbleEstimates verify_bubble_estimates(const std::vector<double>& eps, const GridPtr& grid) {
  if (eps.size() < 3) throw std::invalid_argument("verify_bubble_estimates: need >= 3 epsilons");
  for (std::size_t i = 1; i < eps.size(); ++i)
    if (!(eps[i] < eps[i - 1]))
      throw std::invalid_argument("verify_bubble_estimates: epsilons must decrease");
  const ProblemParams crit{0.0, 1.0, 6.0, 1.0};
  BubbleEstimates out;
  std::vector<double> le, l2, l5, loglog, q3;
  for (double e : eps) {
    const Bubble b = make_bubble(e, grid);
    const EnergyBreakdown eb = energy_breakdown(b.u, crit);
    BubbleNorms row{e, eb.A, eb.C, eb.D, lq(b.u, 3.0), lq(b.u, 5.0)};
    out.rows.push_back(row);
    le.push_back(e);
    l2.push_back(row.L2);
    l5.push_back(row.L5);
    loglog.push_back(std::abs(std::log(e)));
    q3.push_back(row.L3 / std::pow(e, 1.5));
  }
  out.q2 = fit_loglog(le, l2);
  out.q5 = fit_loglog(le, l5);
  out.q3_log = fit_loglog(loglog, q3);
  out.q3_slope_ratio = fit_line(loglog, q3).slope / (kFourPi * std::pow(3.0, 0.75));
  const auto& r1 = out.rows[out.rows.size() - 2];
  const auto& r2 = out.rows.back();
  out.A_limit = (r1.epsilon * r2.A - r2.epsilon * r1.A) / (r1.epsilon - r2.epsilon);
  out.C_limit = r2.C6;
  return out;
}

namespace {

struct Sample {
  double F = 0.0;
  double mass_error = 0.0;
};

struct Interaction {
  const ProblemParams& prm;
  const RadialFunction& up;
  const RadialFunction& U;

  Sample operator()(double t) const {
    std::vector<double> w(up.values());
    for (std::size_t i = 0; i < w.size(); ++i) w[i] += t * U[i];
    const RadialFunction wf(up.grid_ptr(), std::move(w));
    const EnergyBreakdown e = energy_breakdown(wf, prm);
    const double theta = std::sqrt(e.D / prm.c);
    const double B = e.B / (theta * theta * theta);
    Sample s;
    s.F = 0.5 * e.A - 0.25 * prm.gamma * B - prm.a * e.C / prm.p;
    s.mass_error = std::abs(e.D / (theta * theta) / prm.c - 1.0);
    return s;
  }
};

}  // namespace

InteractionResult interaction_sup(const ProblemParams& prm, const RadialFunction& u_plus,
                                  double crit_level, double epsilon) {
  if (prm.p != 6.0) throw std::invalid_argument("interaction_sup: p must be 6");
  const Bubble b = make_bubble(epsilon, u_plus.grid_ptr());
  const Interaction eval{prm, u_plus, b.u};

  InteractionResult out;
  out.epsilon = epsilon;
  out.crit_level = crit_level;
  out.gamma_plus = energy_breakdown(u_plus, prm).F;

  constexpr int kPoints = 200;
  std::vector<double> ts(kPoints), fs(kPoints);
  int best = 0;
  for (int k = 0; k < kPoints; ++k) {
    ts[k] = std::pow(10.0, -2.0 + 4.0 * k / (kPoints - 1));
    const Sample s = eval(ts[k]);
    fs[k] = s.F;
    out.max_mass_error = std::max(out.max_mass_error, s.mass_error);
    if (fs[k] > fs[best]) best = k;
  }
  // Golden section on the bracket around the coarse maximum.
  double lo = ts[std::max(best - 1, 0)], hi = ts[std::min(best + 1, kPoints - 1)];
  const double phi = (std::sqrt(5.0) - 1.0) / 2.0;
  double x1 = hi - phi * (hi - lo), x2 = lo + phi * (hi - lo);
  double f1 = eval(x1).F, f2 = eval(x2).F;
  for (int it = 0; it < 80 && hi - lo > 1e-12 * hi; ++it) {
    if (f1 < f2) {
      lo = x1;
      x1 = x2;
      f1 = f2;
      x2 = lo + phi * (hi - lo);
      f2 = eval(x2).F;
    } else {
      hi = x2;
      x2 = x1;
      f2 = f1;
      x1 = hi - phi * (hi - lo);
      f1 = eval(x1).F;
    }
  }
  out.argmax_t = f1 > f2 ? x1 : x2;
  out.sup_F = std::max({f1, f2, fs[best]});
  if (fs[best] >= out.sup_F) out.argmax_t = ts[best];
  out.margin = out.gamma_plus + crit_level - out.sup_F;

  const double half = out.gamma_plus + 0.5 * crit_level;
  int k1 = best;
  while (k1 < kPoints && fs[k1] >= half) ++k1;
  out.t1 = k1 < kPoints ? ts[k1] : ts.back();
  out.tail_below_half = k1 < kPoints;
  for (int k = k1; k < kPoints; ++k) out.tail_below_half = out.tail_below_half && fs[k] < half;

  // C(u + tU) >= C(u) + C(tU) + 6 int u^5 tU + 6 int u (tU)^5 at the argmax.
  {
    const RadialGrid& g = u_plus.grid();
    const double t = out.argmax_t;
    std::vector<double> w(g.n), cu(g.n), ctu(g.n), x5(g.n), y5(g.n);
    for (std::size_t i = 0; i < g.n; ++i) {
      const double u = u_plus[i], v = t * b.u[i];
      w[i] = std::pow(std::abs(u + v), 6.0);
      cu[i] = std::pow(u, 6.0);
      ctu[i] = std::pow(v, 6.0);
      x5[i] = std::pow(u, 5.0) * v;
      y5[i] = u * std::pow(v, 5.0);
    }
    const double lhs = integrate(g, w);
    const double rhs = integrate(g, cu) + integrate(g, ctu) + 6.0 * integrate(g, x5) +
                       6.0 * integrate(g, y5);
    out.cross_term_ok = lhs >= rhs * (1.0 - 1e-12);
  }
  // int |u+|^p |U|^q between min_{B2} u+^p and max u+^p times int |U|^q.
  {
    const RadialGrid& g = u_plus.grid();
    double umin = std::numeric_limits<double>::infinity(), umax = 0.0;
    for (std::size_t i = 0; i < g.n; ++i) {
      umax = std::max(umax, std::abs(u_plus[i]));
      if (g.r[i] <= 2.0) umin = std::min(umin, std::abs(u_plus[i]));
    }
    out.equivalence_ok = true;
    for (double pp : {1.0, 2.0}) {
      for (double q : {2.0, 3.0, 5.0}) {
        std::vector<double> num(g.n), den(g.n);
        for (std::size_t i = 0; i < g.n; ++i) {
          den[i] = std::pow(std::abs(b.u[i]), q);
          num[i] = std::pow(std::abs(u_plus[i]), pp) * den[i];
        }
        const double ratio = integrate(g, num) / integrate(g, den);
        const double tol = 1e-12;
        out.equivalence_ok = out.equivalence_ok && ratio >= std::pow(umin, pp) * (1.0 - tol) &&
                             ratio <= std::pow(umax, pp) * (1.0 + tol);
      }
    }
  }
  return out;
}

InteractionStudy interaction_study(const ProblemParams& prm, const RadialFunction& u_plus,
                                   double crit_level, const std::vector<double>& eps) {
  InteractionStudy st;
  std::vector<double> e, m;
  for (double x : eps) {
    st.rows.push_back(interaction_sup(prm, u_plus, crit_level, x));
    if (st.rows.back().margin > 0.0) {
      e.push_back(x);
      m.push_back(st.rows.back().margin);
    }
  }
  if (e.size() >= 2) st.margin_fit = fit_loglog(e, m);
  return st;
}

}  // namespace sps
