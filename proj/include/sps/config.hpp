#pragma once

#include <istream>
#include <string>

#include "sps/sweep.hpp"

namespace sps {

/// Contents of a run file: a SweepSpec plus the fields `solve` needs.
/// Format: one `key = value` per line, `#` starts a comment, lists are
/// comma-separated. Unknown keys, bad values and duplicates raise InvalidConfig.
///
/// Keys: gamma a p c c_values c_lo c_hi points n r_max spacing tol_grad
/// tol_energy max_iter max_seconds adapt_domain threads fit_exclude
/// continuity output cache seed branch
struct RunConfig {
  SweepSpec sweep;
  double c = 0.0;        // single-point mass for `solve`; 0 means c1/2 or 1
  std::string branch = "auto";  // plus | minus | global | auto
};

RunConfig parse_config(std::istream& in);
RunConfig load_config(const std::string& path);

}  // namespace sps
