#pragma once

#include <stdexcept>
#include <string>

namespace sps {

/// Base of every failure raised by the solver stack.
struct SolverError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// g'_u(t*) <= 0: the fiber has no pair of critical points.
struct DegenerateFiber : SolverError {
  using SolverError::SolverError;
};

/// Plus-branch iterate left V(c) = {A < k1}.
struct BoundaryStall : SolverError {
  using SolverError::SolverError;
};

struct NonConvergence : SolverError {
  using SolverError::SolverError;
};

/// Mass concentrating at the origin faster than the grid resolves.
struct BubbleEscape : SolverError {
  using SolverError::SolverError;
};

struct UnderResolved : SolverError {
  using SolverError::SolverError;
};

struct InvalidConfig : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

}  // namespace sps
