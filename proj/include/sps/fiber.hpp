#pragma once

#include <cstdint>
#include <limits>

#include "sps/functionals.hpp"

namespace sps {

enum class FiberClass { LambdaPlus, LambdaZero, LambdaMinus, NotOnLambda };
const char* to_string(FiberClass c);

/// Fiber map g(t) = t^2 A/2 - gamma t B/4 - a t^sigma C/p of a fixed triple.
/// All root finding runs on (A, B, C); the scaling laws make it exact.
struct FiberProfile {
  static constexpr double nan = std::numeric_limits<double>::quiet_NaN();

  double A = 0.0, B = 0.0, C = 0.0;
  double gamma = 0.0, a = 0.0, p = 0.0, sigma = 0.0;
  double t_star = nan;   // zero of g'' (a > 0 only)
  double s_plus = nan;   // local minimum of g
  double s_minus = nan;  // local maximum of g
  bool monotone_increasing = false;  // g' > 0 on (0, inf)
  FiberClass classification = FiberClass::NotOnLambda;

  double g(double t) const;
  double dg(double t) const;
  double d2g(double t) const;
  /// Triple of u^t.
  double A_at(double t) const { return t * t * A; }
  double B_at(double t) const { return t * B; }
  double C_at(double t) const;
  /// Q(u^t) = t g'(t).
  double Q_at(double t) const { return t * dg(t); }
};

/// Throws DegenerateFiber when gamma, a > 0 and g'(t*) <= 0.
FiberProfile fiber_profile(double A, double B, double C, const ProblemParams& prm);
FiberProfile fiber_profile(const EnergyBreakdown& e, const ProblemParams& prm);
FiberProfile fiber_profile(const RadialFunction& u, const ProblemParams& prm);

enum class FiberBranch { plus, minus };

/// I+(u) = F(u^{s+}), I-(u) = F(u^{s-}); propagates DegenerateFiber.
double reduced_I(const FiberProfile& f, FiberBranch branch);
double reduced_I(const RadialFunction& u, FiberBranch branch, const ProblemParams& prm);

/// Random smooth profiles on S(c) used by the probes.
RadialFunction random_profile(const GridPtr& grid, double mass, std::uint64_t seed,
                              bool allow_sign_change = false);

struct LambdaZeroReport {
  std::size_t samples = 0;
  std::size_t positive = 0;
  double min_ratio = std::numeric_limits<double>::infinity();  // min g'(t*)/sqrt(A), or min g'(t)
  bool all_positive = false;
};

/// gamma, a > 0: checks g'(t*) > 0 on random S(c) profiles.
/// gamma, a < 0: checks g'(t) > 0 on a log t-grid of t_points values.
LambdaZeroReport lambda_zero_probe(const ProblemParams& prm, std::size_t samples,
                                   const GridPtr& grid, std::uint64_t seed = 1,
                                   std::size_t t_points = 100);

}  // namespace sps
