#pragma once

#include <cstddef>
#include <span>

namespace sps {

struct LineFit {
  double slope = 0.0;
  double intercept = 0.0;
  double residual = 0.0;  // RMS of the fit residuals
  double slope_stderr = 0.0;
  std::size_t points = 0;
  bool flagged = false;  // residual > 0.1
};

/// Ordinary least squares y = slope x + intercept. Needs >= 2 points.
LineFit fit_line(std::span<const double> x, std::span<const double> y);
/// Fit of log|y| against log x.
LineFit fit_loglog(std::span<const double> x, std::span<const double> y);

}  // namespace sps
