#pragma once

#include <optional>
#include <string>

#include "sps/functionals.hpp"

namespace sps {

struct SharpConstants {
  double gamma = 0.0, a = 0.0, p = 0.0;
  double K_GN = 0.0;
  double K_H = 0.0;
  double M = 0.0, N = 0.0;
  double c1 = 0.0;
  double k0 = 0.0, k1 = 0.0;
  std::optional<double> crit_level;  // 1 / (3 sqrt(a K_GN)), p = 6 and a > 0 only
};

/// B(u) / (A^{1/2} D^{3/2}).
double hartree_quotient(const EnergyBreakdown& e);
/// C(u) / (A^{sigma/2} D^{(6-p)/4}) with C = ||u||_p^p.
double gn_quotient(const EnergyBreakdown& e, double p);
double hartree_quotient(const RadialFunction& u);
double gn_quotient(const RadialFunction& u, double p);

struct SharpResult {
  double value = 0.0;
  RadialFunction maximizer;  // quotient(maximizer) == value up to discretization
  double refinement_change = 0.0;  // relative change under grid doubling, when checked
};

struct ConstantsOptions {
  std::size_t n = 4096;
  bool check_refinement = true;  // repeat at 2n; NonConvergence if the change exceeds 1e-3
  double max_seconds = 60.0;
};

/// Maximizer of the Hartree quotient: minimizer of A/2 - B/4 on S(c), which
/// saturates the inequality.
SharpResult sharp_kh(const ConstantsOptions& opt = {});

/// p < 6: the maximizer is the fiber-reduced minimizer of A/2 - C/p on S(1).
/// p = 6: Richardson extrapolation of truncated bubble quotients.
SharpResult sharp_kgn(double p, const ConstantsOptions& opt = {});

/// Closed formulas for M, N, c1, k0, k1 and the critical level. M, N, c1, k0,
/// k1 are NaN unless gamma > 0 and a > 0.
SharpConstants thresholds(const ProblemParams& prm, double K_GN, double K_H);

/// Thresholds from freshly computed (or cached) sharp constants. The cache is
/// a JSON document keyed by (gamma, a, p); an empty path disables it.
SharpConstants compute_constants(const ProblemParams& prm, const std::string& cache_path = {},
                                 const ConstantsOptions& opt = {});

}  // namespace sps
