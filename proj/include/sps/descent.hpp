#pragma once

#include <limits>
#include <string>

#include "sps/radial.hpp"

#include "sps/fiber.hpp"
#include "sps/functionals.hpp"

namespace sps {

/// What the normalized flow minimizes over S(c).
enum class DescentTarget {
  energy,       // F itself
  fiber_plus,   // I+(u) = F(u^{s+})
  fiber_minus,  // I-(u) = F(u^{s-}); with gamma < 0 the single fiber root
};

struct DescentOptions {
  double tol_grad = 1e-6;     // on ||g + lambda u|| / (|lambda| ||u||)
  double tol_energy = 1e-12;  // relative energy decrease
  int max_iter = 20000;
  double tau0 = 1e-2;
  double tau_max = 1.0;
  double max_seconds = 60.0;
  double a_ceiling = std::numeric_limits<double>::infinity();   // BoundaryStall
  double bubble_ceiling = std::numeric_limits<double>::infinity();  // BubbleEscape
  bool throw_on_failure = true;
  int verbose = 0;
};

struct DescentState {
  RadialFunction u;   // iterate (not projected onto the fiber root)
  EnergyBreakdown e;  // of u
  double s = 1.0;     // fiber root of u for the fiber targets, 1 otherwise
  double energy = 0.0;
  double lambda = 0.0;
  double grad_rel = 0.0;
  double min_energy = std::numeric_limits<double>::infinity();  // lowest accepted level
  int iterations = 0;
  bool converged = false;
  std::string stop_reason;
};

/// Preconditioned, tangent-projected gradient flow on S(c) with energy
/// line search. The step is u <- normalize(u - tau P(g + lambda u)) with
/// P = (s^2(-Laplace) + mu)^{-1} on a finite-volume stencil.
DescentState descend(RadialFunction u0, const ProblemParams& prm, DescentTarget target,
                     const DescentOptions& opt);

}  // namespace sps

namespace sps {

struct PolishOptions {
  double tol = 1e-10;  // target for ||g + lambda u|| / (|lambda| ||u||)
  int max_newton = 40;
  int gmres_restart = 80;
  int gmres_max = 800;
  int verbose = 0;
};

struct PolishResult {
  RadialFunction u;
  double lambda = 0.0;
  double grad_rel = 0.0;
  double energy_change = 0.0;  // |dF| / (|F| + A) over the last accepted step
  int newton_iterations = 0;
  int krylov_iterations = 0;
  bool improved = false;
};

/// Newton-Krylov on the bordered system (g(u) + lambda u = 0, ||u||^2 = c).
/// GMRES is right-preconditioned with the finite-volume operator of the flow.
/// Converges to the nearest critical point, so it must start close to one.
PolishResult newton_polish(RadialFunction u, double lambda, const ProblemParams& prm,
                           const PolishOptions& opt = {});

}  // namespace sps

namespace sps {

struct RelaxOptions {
  std::size_t n = 4096;
  Spacing spacing = Spacing::graded;
  double tol_grad = 1e-6;
  double tol_energy = 1e-12;
  double coarse_tol = 1e-4;  // flow tolerance before the Newton stage
  int max_iter = 20000;
  double max_seconds = 60.0;
  bool adapt_domain = true;
  double decay_lengths = 35.0;  // target R = decay_lengths / sqrt(lambda)
  double r_cap = 4000.0;
  double a_ceiling = std::numeric_limits<double>::infinity();
  double bubble_ceiling = std::numeric_limits<double>::infinity();
  bool polish = true;
  int verbose = 0;
};

struct RelaxResult {
  RadialFunction u;  // on the fiber root for fiber targets, so g + lambda u ~ 0
  double lambda = 0.0;
  double grad_rel = 0.0;
  double energy_change = 0.0;
  int iterations = 0;  // flow steps plus Newton steps
  int regrids = 0;
  bool converged = false;
  std::string stop_reason;
};

/// Flow to coarse_tol, move the domain to the decay length of the iterate,
/// then Newton-polish. Throws BoundaryStall / BubbleEscape from the flow and
/// NonConvergence when neither stage reaches tol_grad.
RelaxResult relax(RadialFunction u0, const ProblemParams& prm, DescentTarget target,
                  const RelaxOptions& opt);

}  // namespace sps
