#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "sps/fit.hpp"
#include "sps/solvers.hpp"

namespace sps {

struct SweepSpec {
  ProblemParams params{1.0, 1.0, 4.0, 1.0};  // c is ignored
  std::vector<double> c_values;  // explicit grid; empty selects the default
  // Default grid: `points` log-spaced values in [c_lo, c_hi], as fractions of
  // c1 when gamma, a > 0 and as absolute masses otherwise.
  double c_lo = 0.05, c_hi = 0.8;
  std::size_t points = 8;
  SolverConfig solver;
  std::size_t threads = 0;      // 0: hardware concurrency
  std::size_t fit_exclude = 2;  // largest c values left out of the asymptotic fits
  bool continuity = true;
  std::string output;  // base path for .json / .csv; empty: no files
  std::string cache;   // sharp-constant cache
  std::uint64_t seed = 1;
};

struct BranchSummary {
  bool ok = false;
  std::string error;
  double energy = 0.0, lambda = 0.0, lambda_direct = 0.0;
  double A = 0.0, B = 0.0, C = 0.0;
  double q_rel = 0.0, eq_rel = 0.0, grad_rel = 0.0, residual = 0.0, min_interior = 0.0;
  double r_max = 0.0;
  int iterations = 0;
  std::string classification;
};

BranchSummary summarize(const BranchResult& r);

struct SweepPoint {
  double c = 0.0;
  BranchSummary plus, minus;  // two-branch regime
  BranchSummary global;       // gamma > 0 > a
};

struct ContinuityCheck {
  double c = 0.0;
  std::vector<double> deltas, diffs;  // |gamma+(c + delta) - gamma+(c)|
  bool pass = false;
};

struct SweepReport {
  SweepSpec spec;
  SharpConstants consts;
  bool two_branch = true;
  std::vector<SweepPoint> points;

  LineFit lambda_plus_fit, gamma_plus_fit, lambda_minus_fit;
  double K_lambda_plus = 0.0;   // max lambda+ / c^2
  double K_gamma_plus = 0.0;    // max |gamma+| / c^3
  double K_lambda_minus = 0.0;  // p = 6: max lambda- / c^{1/2}
  double gamma_minus_smallest = 0.0;
  double crit_gap = 0.0;  // p = 6: |gamma-(c_min) / crit_level - 1|
  std::vector<bool> gamma_minus_decreasing;  // per adjacent pair
  bool gamma_minus_monotone = false;
  ContinuityCheck continuity;

  // gamma > 0 > a
  LineFit m_fit;
  double K1 = 0.0, K2 = 0.0;  // |m| <= K1 c^3 + K2 c^{2p-3} at every point
  double K3 = 0.0;            // lambda <= K3 c^2
  bool m_negative = false, lambda_positive = false;
  bool explicit_bound = false;  // |m| <= (gamma K_H)^2 c^3 / 32

  std::vector<std::string> flagged;  // fits with residual > 0.1
};

SweepReport run_sweep(const SweepSpec& spec);

/// Writes <output>.json and <output>.csv.
void write_sweep(const SweepReport& rep, const std::string& base);

struct RegimeCase {
  double gamma = 0.0, a = 0.0, p = 4.0;
  double c = 1.0;
  bool c_fraction_of_c1 = false;
};

struct RegimeRow {
  RegimeCase input;
  double c = 0.0;
  std::string predicted, observed, detail;
  bool match = false;
};

std::vector<RegimeCase> default_regimes();
std::vector<RegimeRow> regime_table(const std::vector<RegimeCase>& cases, const SolverConfig& cfg,
                                    const std::string& cache = {});

}  // namespace sps
