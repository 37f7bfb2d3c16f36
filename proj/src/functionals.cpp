#include "sps/functionals.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

#include "sps/simd.hpp"

namespace sps {

namespace {

constexpr double kFourPi = 4.0 * std::numbers::pi;

// |x|^q with a fast path for the integer exponents used by the sweeps.
inline double abs_pow(double x, double q) {
  const double ax = std::abs(x);
  if (q == 4.0) {
    const double x2 = ax * ax;
    return x2 * x2;
  }
  if (q == 6.0) {
    const double x2 = ax * ax;
    return x2 * x2 * x2;
  }
  if (q == 2.0) return ax * ax;
  return ax == 0.0 ? 0.0 : std::pow(ax, q);
}

}  // namespace

void ProblemParams::validate() const {
  if (!(p > 10.0 / 3.0 && p <= 6.0))
    throw std::invalid_argument("ProblemParams: p must lie in (10/3, 6]");
  if (!(c > 0.0) || !std::isfinite(c)) throw std::invalid_argument("ProblemParams: c must be > 0");
  if (!std::isfinite(gamma) || !std::isfinite(a))
    throw std::invalid_argument("ProblemParams: non-finite coefficient");
}

EnergyBreakdown compose(double A, double B, double C, double D, const ProblemParams& prm) {
  EnergyBreakdown e;
  e.A = A;
  e.B = B;
  e.C = C;
  e.D = D;
  e.F = 0.5 * A - 0.25 * prm.gamma * B - prm.a * C / prm.p;
  e.Q = A - 0.25 * prm.gamma * B - prm.a * prm.sigma() * C / prm.p;
  return e;
}

double lp_power(const RadialFunction& u, double p) {
  const auto& v = u.values();
  std::vector<double> f(v.size());
  for (std::size_t i = 0; i < v.size(); ++i) f[i] = abs_pow(v[i], p);
  return kFourPi * integrate(u.grid(), f);
}

EnergyBreakdown energy_breakdown(const RadialFunction& u, const ProblemParams& prm) {
  const RadialGrid& g = u.grid();
  const auto du = radial_derivative(u);
  const RadialFunction phi = poisson_potential(u);
  const auto& v = u.values();
  const auto& k = simd::active();
  const double A = kFourPi * k.wdot(g.w.data(), du.data(), du.data(), g.n);
  const double B = kFourPi * k.wdot3(g.w.data(), phi.values().data(), v.data(), v.data(), g.n);
  const double C = lp_power(u, prm.p);
  return compose(A, B, C, u.mass(), prm);
}

RadialFunction weighted_gradient(const RadialFunction& u, const ProblemParams& prm, double s2,
                                 double s1, double sp) {
  const auto lap = radial_laplacian(u);
  const RadialFunction phi = poisson_potential(u);
  const auto& v = u.values();
  const auto& ph = phi.values();
  std::vector<double> g(v.size());
  const double ga = s1 * prm.gamma, aa = sp * prm.a, q = prm.p - 2.0;
  for (std::size_t i = 0; i < v.size(); ++i) {
    // |u|^{p-2}u extended by 0 at u = 0
    const double nl = v[i] == 0.0 ? 0.0 : abs_pow(v[i], q) * v[i];
    g[i] = -s2 * lap[i] - ga * ph[i] * v[i] - aa * nl;
  }
  return RadialFunction(u.grid_ptr(), std::move(g), true);
}

RadialFunction h1_gradient(const RadialFunction& u, const ProblemParams& prm) {
  return weighted_gradient(u, prm, 1.0, 1.0, 1.0);
}

double pairing(const RadialFunction& f, const RadialFunction& g) {
  return kFourPi * integrate(f.grid(), f.values(), g.values());
}

double lagrange_multiplier(const EnergyBreakdown& e, const ProblemParams& prm,
                           MultiplierForm form) {
  if (!(e.D > 0.0)) return 0.0;
  if (form == MultiplierForm::direct) return -(e.A - prm.gamma * e.B - prm.a * e.C) / e.D;
  return (0.75 * prm.gamma * e.B + prm.a * (1.0 - prm.sigma() / prm.p) * e.C) / e.D;
}

double lagrange_multiplier(const RadialFunction& u, const ProblemParams& prm,
                           MultiplierForm form) {
  return lagrange_multiplier(energy_breakdown(u, prm), prm, form);
}

PohozaevResidual pohozaev_residual(const EnergyBreakdown& e, double lambda,
                                   const ProblemParams& prm) {
  PohozaevResidual r;
  if (!(e.A > 0.0)) return r;
  const double p = prm.p;
  r.q_rel = std::abs(e.Q) / e.A;
  const double lhs = 2.0 * (6.0 - p) * e.A + (5.0 * p - 12.0) * prm.gamma * e.B;
  r.eq_rel = std::abs(lhs - 2.0 * (3.0 * p - 6.0) * lambda * e.D) / e.A;
  return r;
}

PohozaevResidual pohozaev_residual(const RadialFunction& u, double lambda,
                                   const ProblemParams& prm) {
  return pohozaev_residual(energy_breakdown(u, prm), lambda, prm);
}

double equation_residual(const RadialFunction& u, double lambda, const ProblemParams& prm) {
  RadialFunction g = h1_gradient(u, prm);
  auto& gv = g.mutable_values();
  const auto& v = u.values();
  for (std::size_t i = 0; i < v.size(); ++i) gv[i] += lambda * v[i];
  const double num = std::sqrt(g.mass());
  const double den = std::abs(lambda) * std::sqrt(u.mass());
  return den > 0.0 ? num / den : num;
}

}  // namespace sps
