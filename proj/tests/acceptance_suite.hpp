#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace acceptance {

struct Outcome {
  int id = 0;
  std::string name;
  bool pass = false;
  std::string detail;
};

struct Options {
  std::size_t n = 4096;       // p < 6 solves
  std::size_t n_crit = 8192;  // p = 6 solves and bubbles
  std::size_t threads = 0;
  std::string cache;  // sharp-constant cache, empty for none
};

/// Runs every criterion, writing one "PASS|FAIL <id> <name>: <detail>" line
/// to `out` as each finishes.
std::vector<Outcome> run_all(const Options& opt, std::ostream& out);

}  // namespace acceptance
