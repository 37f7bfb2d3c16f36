#pragma once

#include <optional>
#include <string>
#include <vector>

#include "sps/constants.hpp"
#include "sps/fiber.hpp"
#include "sps/functionals.hpp"

namespace sps {

enum class Branch { PlusLocalMin, MinusMountainPass, GlobalMin };
const char* to_string(Branch b);

struct SolverConfig {
  std::size_t n = 4096;
  double r_max = 40.0;  // starting domain; moved to the decay length when adapt_domain
  Spacing spacing = Spacing::graded;
  double tol_grad = 1e-6;
  double tol_energy = 1e-12;
  int max_iter = 20000;
  double max_seconds = 60.0;
  bool adapt_domain = true;
  int verbose = 0;
};

struct BranchResult {
  RadialFunction u;
  Branch branch = Branch::PlusLocalMin;
  double lambda = 0.0;         // (3 gamma B / 4 + a (1 - sigma/p) C) / c
  double lambda_direct = 0.0;  // -(A - gamma B - a C) / c
  double energy = 0.0;
  EnergyBreakdown e;
  double q_rel = 0.0;
  double eq_rel = 0.0;
  double grad_rel = 0.0;
  double residual = 0.0;  // ||-Lap u + lambda u - gamma phi u - a|u|^{p-2}u|| / (lambda ||u||)
  double energy_change = 0.0;
  double min_interior = 0.0;  // min u over nodes with r < R
  FiberClass classification = FiberClass::NotOnLambda;
  int iterations = 0;
  bool converged = false;
};

/// Local minimizer on V(c) = {A < k1}; throws BoundaryStall if the flow reaches A >= k1.
BranchResult solve_plus(const ProblemParams& prm, const SharpConstants& consts,
                        const SolverConfig& cfg = {},
                        const std::optional<RadialFunction>& init = std::nullopt);

/// Minimizer of I-(u) = F(u^{s-}) on S(c); returns u^{s-}. Without init the
/// plus solution, dilated to its s-, is the starting point.
BranchResult solve_minus(const ProblemParams& prm, const SharpConstants& consts,
                         const SolverConfig& cfg = {},
                         const std::optional<RadialFunction>& init = std::nullopt);

/// gamma > 0, a < 0: minimizer of F on S(c).
BranchResult solve_global(const ProblemParams& prm, const SolverConfig& cfg = {},
                          const std::optional<RadialFunction>& init = std::nullopt);

/// Fills the diagnostics of a BranchResult from a profile and its multiplier.
BranchResult diagnose(RadialFunction u, const ProblemParams& prm, Branch branch);

struct NonexistenceTrial {
  double epsilon = 0.0;     // bubble seed scale
  double min_energy = 0.0;  // lowest level of F on Lambda(c) reached
  double final_energy = 0.0;
  double lambda = 0.0;         // Q-corrected multiplier at the last iterate
  double lambda_direct = 0.0;
  double grad_rel = 0.0;
  double peak_A = 0.0;
  int iterations = 0;
  std::string stop_reason;
};

struct NonexistenceReport {
  std::string regime;  // "monotone" (gamma, a < 0) or "critical" (gamma < 0 < a, p = 6)
  std::size_t profiles = 0, t_points = 0;
  double min_dg = 0.0;  // monotone: min g'_u(t)/sqrt(A) over profiles x t
  bool monotone = false;
  double crit_level = 0.0;
  double min_energy = 0.0;  // critical: over all trials
  bool above_threshold = false;  // min_energy >= 0.95 crit_level
  bool lambda_negative = false;  // every trial's multipliers < 0
  std::vector<NonexistenceTrial> trials;
  std::vector<double> refinement_n;  // best trial repeated on finer grids
  std::vector<double> refinement_energy;
};

/// gamma < 0, a < 0: fiber monotonicity on random profiles.
/// gamma < 0, a > 0, p = 6: bubble-seeded descents on Lambda(c) with capped iterations.
NonexistenceReport nonexistence_probe(const ProblemParams& prm, const SharpConstants& consts,
                                      std::size_t trials, const SolverConfig& cfg = {},
                                      std::uint64_t seed = 1);

}  // namespace sps
