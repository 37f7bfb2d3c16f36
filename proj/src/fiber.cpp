#include "sps/fiber.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <stdexcept>

#include "sps/errors.hpp"

namespace sps {

const char* to_string(FiberClass c) {
  switch (c) {
    case FiberClass::LambdaPlus: return "LambdaPlus";
    case FiberClass::LambdaZero: return "LambdaZero";
    case FiberClass::LambdaMinus: return "LambdaMinus";
    case FiberClass::NotOnLambda: return "NotOnLambda";
  }
  return "?";
}

double FiberProfile::C_at(double t) const { return std::pow(t, sigma) * C; }

double FiberProfile::g(double t) const {
  return 0.5 * t * t * A - 0.25 * gamma * t * B - a * std::pow(t, sigma) * C / p;
}

double FiberProfile::dg(double t) const {
  return t * A - 0.25 * gamma * B - a * sigma / p * std::pow(t, sigma - 1.0) * C;
}

double FiberProfile::d2g(double t) const {
  return A - a * sigma * (sigma - 1.0) / p * std::pow(t, sigma - 2.0) * C;
}

namespace {

// Root of g' inside [lo, hi] where g' changes sign; bisection to full
// precision, then Newton steps kept inside the bracket.
double polish_root(const FiberProfile& f, double lo, double hi) {
  double flo = f.dg(lo);
  for (int it = 0; it < 200 && hi - lo > 4e-16 * hi; ++it) {
    const double mid = 0.5 * (lo + hi);
    const double fm = f.dg(mid);
    if ((fm < 0.0) == (flo < 0.0)) {
      lo = mid;
      flo = fm;
    } else {
      hi = mid;
    }
  }
  double t = 0.5 * (lo + hi);
  for (int it = 0; it < 3; ++it) {
    const double d2 = f.d2g(t);
    if (d2 == 0.0) break;
    const double next = t - f.dg(t) / d2;
    if (!(next >= lo && next <= hi)) break;
    if (std::abs(f.dg(next)) >= std::abs(f.dg(t))) break;
    t = next;
  }
  return t;
}

}  // namespace

FiberProfile fiber_profile(double A, double B, double C, const ProblemParams& prm) {
  FiberProfile f;
  f.A = A;
  f.B = B;
  f.C = C;
  f.gamma = prm.gamma;
  f.a = prm.a;
  f.p = prm.p;
  f.sigma = prm.sigma();
  if (!(A > 0.0)) throw std::invalid_argument("fiber_profile: A must be positive");

  const double g0 = -0.25 * prm.gamma * B;  // g'(0+)
  const bool concave_tail = prm.a > 0.0 && C > 0.0;
  if (concave_tail) {
    f.t_star = std::pow(prm.p * A / (prm.a * f.sigma * (f.sigma - 1.0) * C), 1.0 / (f.sigma - 2.0));
    const double peak = f.dg(f.t_star);
    if (g0 < 0.0) {
      if (!(peak > 0.0))
        throw DegenerateFiber("fiber has no critical pair: g'(t*) = " + std::to_string(peak));
      f.s_plus = polish_root(f, 0.0, f.t_star);
    }
    double hi = 2.0 * f.t_star;
    while (f.dg(hi) >= 0.0) hi *= 2.0;
    f.s_minus = polish_root(f, f.t_star, hi);
  } else if (g0 < 0.0) {
    double hi = 1.0;
    while (f.dg(hi) <= 0.0) hi *= 2.0;
    f.s_plus = polish_root(f, 0.0, hi);
  } else {
    f.monotone_increasing = g0 > 0.0 || prm.a < 0.0;
  }

  const double tol = 1e-6 * A;
  if (std::abs(f.dg(1.0)) <= tol) {
    const double curv = f.d2g(1.0);
    if (curv > 0.0)
      f.classification = FiberClass::LambdaPlus;
    else if (curv < 0.0)
      f.classification = FiberClass::LambdaMinus;
    else
      f.classification = FiberClass::LambdaZero;
  }
  return f;
}

FiberProfile fiber_profile(const EnergyBreakdown& e, const ProblemParams& prm) {
  return fiber_profile(e.A, e.B, e.C, prm);
}

FiberProfile fiber_profile(const RadialFunction& u, const ProblemParams& prm) {
  return fiber_profile(energy_breakdown(u, prm), prm);
}

double reduced_I(const FiberProfile& f, FiberBranch branch) {
  const double s = branch == FiberBranch::plus ? f.s_plus : f.s_minus;
  if (!std::isfinite(s)) throw DegenerateFiber("reduced_I: requested fiber root does not exist");
  return f.g(s);
}

double reduced_I(const RadialFunction& u, FiberBranch branch, const ProblemParams& prm) {
  return reduced_I(fiber_profile(u, prm), branch);
}

RadialFunction random_profile(const GridPtr& grid, double mass, std::uint64_t seed,
                              bool allow_sign_change) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  struct Bump {
    double amp, width, center;
  };
  std::vector<Bump> bumps(3);
  for (auto& b : bumps) {
    b.amp = allow_sign_change ? 2.0 * unit(rng) - 1.0 : 0.2 + 0.8 * unit(rng);
    b.width = 0.5 * std::pow(8.0, unit(rng));
    b.center = 3.0 * unit(rng);
  }
  auto u = RadialFunction::sample(grid, [&](double r) {
    double v = 0.0;
    for (const auto& b : bumps) {
      // even in r, so smooth through the origin
      const double zm = (r - b.center) / b.width, zp = (r + b.center) / b.width;
      v += b.amp * (std::exp(-zm * zm) + std::exp(-zp * zp));
    }
    return v;
  });
  u.normalize_mass(mass);
  return u;
}

LambdaZeroReport lambda_zero_probe(const ProblemParams& prm, std::size_t samples,
                                   const GridPtr& grid, std::uint64_t seed,
                                   std::size_t t_points) {
  const bool pair_regime = prm.gamma > 0.0 && prm.a > 0.0;
  const bool monotone_regime = prm.gamma < 0.0 && prm.a < 0.0;
  if (!pair_regime && !monotone_regime)
    throw std::invalid_argument("lambda_zero_probe: needs gamma, a of equal sign");
  LambdaZeroReport rep;
  rep.samples = samples;
  for (std::size_t k = 0; k < samples; ++k) {
    const RadialFunction u = random_profile(grid, prm.c, seed * 1000003ULL + k);
    const EnergyBreakdown e = energy_breakdown(u, prm);
    FiberProfile f;
    f.A = e.A;
    f.B = e.B;
    f.C = e.C;
    f.gamma = prm.gamma;
    f.a = prm.a;
    f.p = prm.p;
    f.sigma = prm.sigma();
    double worst;
    if (pair_regime) {
      const double ts =
          std::pow(prm.p * e.A / (prm.a * f.sigma * (f.sigma - 1.0) * e.C), 1.0 / (f.sigma - 2.0));
      worst = f.dg(ts) / std::sqrt(e.A);
    } else {
      worst = std::numeric_limits<double>::infinity();
      for (std::size_t j = 0; j < t_points; ++j) {
        const double t = std::pow(10.0, -2.0 + 4.0 * static_cast<double>(j) /
                                               static_cast<double>(t_points - 1));
        worst = std::min(worst, f.dg(t) / std::sqrt(e.A));
      }
    }
    rep.min_ratio = std::min(rep.min_ratio, worst);
    if (worst > 0.0) ++rep.positive;
  }
  rep.all_positive = rep.positive == rep.samples;
  return rep;
}

}  // namespace sps
