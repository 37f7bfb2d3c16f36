#pragma once

#include "sps/radial.hpp"

namespace sps {

/// (gamma, a, p, c); sigma = 3(p - 2)/2 is derived.
struct ProblemParams {
  double gamma = 1.0;
  double a = 1.0;
  double p = 4.0;
  double c = 1.0;

  double sigma() const { return 1.5 * (p - 2.0); }
  /// Throws std::invalid_argument unless 10/3 < p <= 6 and c > 0.
  void validate() const;
  ProblemParams with_mass(double mass) const {
    ProblemParams q = *this;
    q.c = mass;
    return q;
  }
};

struct EnergyBreakdown {
  double A = 0.0;  // \int |grad u|^2
  double B = 0.0;  // Hartree double integral
  double C = 0.0;  // \int |u|^p
  double D = 0.0;  // ||u||_2^2
  double F = 0.0;  // A/2 - gamma B/4 - a C/p
  double Q = 0.0;  // A - gamma B/4 - a sigma C/p
};

/// Assembles F and Q from the four integrals.
EnergyBreakdown compose(double A, double B, double C, double D, const ProblemParams& prm);

EnergyBreakdown energy_breakdown(const RadialFunction& u, const ProblemParams& prm);

/// \int |u|^p over R^3.
double lp_power(const RadialFunction& u, double p);

/// g = -Laplace u - gamma phi_u u - a |u|^{p-2} u, zero at R.
RadialFunction h1_gradient(const RadialFunction& u, const ProblemParams& prm);

/// Same as h1_gradient with the three terms weighted: the derivative of
/// u -> s2 A/2 - s1 gamma B/4 - sp a C/p.
RadialFunction weighted_gradient(const RadialFunction& u, const ProblemParams& prm, double s2,
                                 double s1, double sp);

/// L2 pairing 4 pi \int f g r^2 dr.
double pairing(const RadialFunction& f, const RadialFunction& g);

enum class MultiplierForm {
  direct,    // -(A - gamma B - a C)/c
  pohozaev,  // (3 gamma B/4 + a (1 - sigma/p) C)/c, equal to direct on Q = 0
};

/// c is taken as ||u||_2^2 so the formula also applies off the mass sphere.
double lagrange_multiplier(const EnergyBreakdown& e, const ProblemParams& prm,
                           MultiplierForm form = MultiplierForm::direct);
double lagrange_multiplier(const RadialFunction& u, const ProblemParams& prm,
                           MultiplierForm form = MultiplierForm::direct);

struct PohozaevResidual {
  double q_rel = 0.0;   // |Q| / A
  double eq_rel = 0.0;  // |2(6-p)A + (5p-12)gamma B - 2(3p-6) lambda D| / A
};

PohozaevResidual pohozaev_residual(const EnergyBreakdown& e, double lambda,
                                   const ProblemParams& prm);
PohozaevResidual pohozaev_residual(const RadialFunction& u, double lambda,
                                   const ProblemParams& prm);

/// ||g + lambda u||_2 / (|lambda| ||u||_2), the discrete Euler-Lagrange residual.
double equation_residual(const RadialFunction& u, double lambda, const ProblemParams& prm);

}  // namespace sps
