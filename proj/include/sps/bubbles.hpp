#pragma once

#include <vector>

#include "sps/fit.hpp"
#include "sps/functionals.hpp"

namespace sps {

/// Radial cutoff: 1 on [0,1], 0 beyond 2, quintic bridge with vanishing
/// first and second derivatives at both ends.
double bubble_cutoff(double r);

/// Truncated Aubin-Talenti profile xi(r) (3 eps^2)^{1/4} / sqrt(eps^2 + r^2).
double bubble_value(double epsilon, double r);

struct Bubble {
  double epsilon = 0.0;
  RadialFunction u;
};

/// Requires 1e-3 <= epsilon <= 1 and at least 8 grid nodes below epsilon.
Bubble make_bubble(double epsilon, const GridPtr& grid);

/// Nodes strictly inside (0, radius).
std::size_t nodes_below(const RadialGrid& g, double radius);

struct BubbleNorms {
  double epsilon = 0.0;
  double A = 0.0;   // ||grad U||^2
  double C6 = 0.0;  // ||U||_6^6
  double L2 = 0.0, L3 = 0.0, L5 = 0.0;  // ||U||_q^q
};

struct BubbleEstimates {
  std::vector<BubbleNorms> rows;
  LineFit q2;          // log L2 vs log eps, expected slope 1
  LineFit q5;          // log L5 vs log eps, expected slope 1/2
  LineFit q3_log;      // log(L3 / eps^{3/2}) vs log|log eps|, expected slope 1
  double q3_slope_ratio = 0.0;  // d(L3/eps^{3/2})/d|log eps| over 4 pi 3^{3/4}
  double A_limit = 0.0;  // Richardson on the two smallest eps (O(eps) rate)
  double C_limit = 0.0;  // smallest-eps value (O(eps^3) rate)
};

/// Needs >= 3 strictly decreasing epsilons, each resolved by the grid.
BubbleEstimates verify_bubble_estimates(const std::vector<double>& eps, const GridPtr& grid);

struct InteractionResult {
  double epsilon = 0.0;
  double sup_F = 0.0;
  double argmax_t = 0.0;
  double gamma_plus = 0.0;  // F(u+) on the grid in use, equal to the t = 0 value
  double crit_level = 0.0;
  double margin = 0.0;      // gamma_plus + crit_level - sup_F
  double t1 = 0.0;          // first t past the argmax with F < gamma_plus + crit/2
  bool tail_below_half = false;  // F < gamma_plus + crit/2 for every sampled t >= t1
  bool cross_term_ok = false;    // quintic cross-term lower bound on C at argmax
  bool equivalence_ok = false;   // int |u+|^p |U|^q comparable to int |U|^q
  double max_mass_error = 0.0;   // | ||wbar||^2 / c - 1 | over evaluated t
};

/// sup over t of F(wbar_{eps,t}), wbar = sqrt(theta) w(theta x), w = u+ + t U_eps,
/// theta^2 = ||w||^2 / c. Evaluated through the exact dilation laws
/// A(wbar) = A(w), C(wbar) = C(w), B(wbar) = B(w) / theta^3 (p = 6).
/// The t-grid is 200 log points on [1e-2, 1e2] refined by golden section.
InteractionResult interaction_sup(const ProblemParams& prm, const RadialFunction& u_plus,
                                  double crit_level, double epsilon);

struct InteractionStudy {
  std::vector<InteractionResult> rows;
  LineFit margin_fit;  // log margin vs log eps
};

InteractionStudy interaction_study(const ProblemParams& prm, const RadialFunction& u_plus,
                                   double crit_level, const std::vector<double>& eps);

}  // namespace sps
