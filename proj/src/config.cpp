#include "sps/config.hpp"

#include <charconv>
#include <fstream>
#include <set>
#include <sstream>

#include "sps/errors.hpp"

namespace sps {

namespace {

std::string trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return std::string(s.substr(b, e - b + 1));
}

[[noreturn]] void bad(int line, const std::string& key, const std::string& why) {
  throw InvalidConfig("config line " + std::to_string(line) + " (" + key + "): " + why);
}

double to_double(const std::string& v, int line, const std::string& key) {
  double x = 0.0;
  const auto [ptr, ec] = std::from_chars(v.data(), v.data() + v.size(), x);
  if (ec != std::errc() || ptr != v.data() + v.size()) bad(line, key, "not a number: " + v);
  return x;
}

long to_integer(const std::string& v, int line, const std::string& key) {
  long x = 0;
  const auto [ptr, ec] = std::from_chars(v.data(), v.data() + v.size(), x);
  if (ec != std::errc() || ptr != v.data() + v.size() || x < 0)
    bad(line, key, "not a non-negative integer: " + v);
  return x;
}

bool to_bool(const std::string& v, int line, const std::string& key) {
  if (v == "true" || v == "1" || v == "yes") return true;
  if (v == "false" || v == "0" || v == "no") return false;
  bad(line, key, "not a boolean: " + v);
}

}  // namespace

RunConfig parse_config(std::istream& in) {
  RunConfig cfg;
  SweepSpec& s = cfg.sweep;
  std::set<std::string> seen;
  std::string raw;
  for (int line = 1; std::getline(in, raw); ++line) {
    const std::string text = trim(std::string_view(raw).substr(0, raw.find('#')));
    if (text.empty()) continue;
    const auto eq = text.find('=');
    if (eq == std::string::npos) bad(line, text, "expected key = value");
    const std::string key = trim(std::string_view(text).substr(0, eq));
    const std::string val = trim(std::string_view(text).substr(eq + 1));
    if (val.empty()) bad(line, key, "empty value");
    if (!seen.insert(key).second) bad(line, key, "duplicate key");

    auto d = [&] { return to_double(val, line, key); };
    auto i = [&] { return to_integer(val, line, key); };
    auto b = [&] { return to_bool(val, line, key); };
    if (key == "gamma") s.params.gamma = d();
    else if (key == "a") s.params.a = d();
    else if (key == "p") s.params.p = d();
    else if (key == "c") cfg.c = d();
    else if (key == "c_values") {
      std::stringstream ss(val);
      for (std::string item; std::getline(ss, item, ',');)
        s.c_values.push_back(to_double(trim(item), line, key));
    } else if (key == "c_lo") s.c_lo = d();
    else if (key == "c_hi") s.c_hi = d();
    else if (key == "points") s.points = static_cast<std::size_t>(i());
    else if (key == "n") s.solver.n = static_cast<std::size_t>(i());
    else if (key == "r_max") s.solver.r_max = d();
    else if (key == "spacing") {
      if (val == "graded") s.solver.spacing = Spacing::graded;
      else if (val == "uniform") s.solver.spacing = Spacing::uniform;
      else bad(line, key, "expected graded or uniform");
    } else if (key == "tol_grad") s.solver.tol_grad = d();
    else if (key == "tol_energy") s.solver.tol_energy = d();
    else if (key == "max_iter") s.solver.max_iter = static_cast<int>(i());
    else if (key == "max_seconds") s.solver.max_seconds = d();
    else if (key == "adapt_domain") s.solver.adapt_domain = b();
    else if (key == "threads") s.threads = static_cast<std::size_t>(i());
    else if (key == "fit_exclude") s.fit_exclude = static_cast<std::size_t>(i());
    else if (key == "continuity") s.continuity = b();
    else if (key == "output") s.output = val;
    else if (key == "cache") s.cache = val;
    else if (key == "seed") s.seed = static_cast<std::uint64_t>(i());
    else if (key == "branch") {
      if (val != "plus" && val != "minus" && val != "global" && val != "auto")
        bad(line, key, "expected plus, minus, global or auto");
      cfg.branch = val;
    } else bad(line, key, "unknown key");
  }
  if (!(s.params.p > 10.0 / 3.0 && s.params.p <= 6.0)) throw InvalidConfig("p must lie in (10/3, 6]");
  if (s.params.gamma == 0.0 && s.params.a == 0.0) throw InvalidConfig("gamma and a both zero");
  if (cfg.c < 0.0) throw InvalidConfig("c must be positive");
  if (s.solver.n < 16) throw InvalidConfig("n must be at least 16");
  if (!(s.solver.r_max > 0.0)) throw InvalidConfig("r_max must be positive");
  if (!(s.solver.tol_grad > 0.0) || !(s.solver.tol_energy > 0.0))
    throw InvalidConfig("tolerances must be positive");
  for (std::size_t k = 0; k < s.c_values.size(); ++k)
    if (!(s.c_values[k] > 0.0) || (k > 0 && !(s.c_values[k] > s.c_values[k - 1])))
      throw InvalidConfig("c_values must be positive and strictly ascending");
  return cfg;
}

RunConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InvalidConfig("cannot open config file: " + path);
  return parse_config(in);
}

}  // namespace sps
