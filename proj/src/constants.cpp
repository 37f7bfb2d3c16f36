#include "sps/constants.hpp"

#include <cmath>
#include <fstream>
#include <limits>
#include <functional>
#include <mutex>
#include <sstream>

#include <json.hpp>

#include "sps/bubbles.hpp"
#include "sps/descent.hpp"
#include "sps/errors.hpp"

namespace sps {

double hartree_quotient(const EnergyBreakdown& e) {
  return e.B / (std::sqrt(e.A) * std::pow(e.D, 1.5));
}

double gn_quotient(const EnergyBreakdown& e, double p) {
  const double sigma = 1.5 * (p - 2.0);
  return e.C / (std::pow(e.A, 0.5 * sigma) * std::pow(e.D, 0.25 * (6.0 - p)));
}

double hartree_quotient(const RadialFunction& u) {
  return hartree_quotient(energy_breakdown(u, ProblemParams{1.0, 0.0, 4.0, 1.0}));
}

double gn_quotient(const RadialFunction& u, double p) {
  return gn_quotient(energy_breakdown(u, ProblemParams{0.0, 1.0, p, 1.0}), p);
}

namespace {

SharpResult kh_at(std::size_t n, double seconds) {
  const ProblemParams prm{1.0, 0.0, 4.0, 4.0};
  auto grid = make_grid(n, 40.0);
  auto u0 = RadialFunction::sample(grid, [](double r) { return std::exp(-r * r); });
  u0.normalize_mass(prm.c);
  RelaxOptions ro;
  ro.n = n;
  ro.max_seconds = seconds;
  const RelaxResult rr = relax(u0, prm, DescentTarget::energy, ro);
  return {hartree_quotient(rr.u), rr.u, 0.0};
}

SharpResult kgn_at(double p, std::size_t n, double seconds) {
  const ProblemParams prm{0.0, 1.0, p, 1.0};
  auto grid = make_grid(n, 40.0);
  auto u0 = RadialFunction::sample(grid, [](double r) { return std::exp(-r * r); });
  u0.normalize_mass(prm.c);
  RelaxOptions ro;
  ro.n = n;
  ro.max_seconds = seconds;
  const RelaxResult rr = relax(u0, prm, DescentTarget::fiber_minus, ro);
  return {gn_quotient(rr.u, p), rr.u, 0.0};
}

// Truncated bubble quotients converge at rate O(eps); one Richardson step.
SharpResult kgn_critical(std::size_t n) {
  auto grid = make_grid(2 * n, 2.5);
  auto quotient = [&](double eps) {
    auto u = RadialFunction::sample(grid, [&](double r) { return bubble_value(eps, r); });
    return std::pair{gn_quotient(u, 6.0), u};
  };
  constexpr double e1 = 2e-3, e2 = 1e-3;
  const double q1 = quotient(e1).first, q2 = quotient(e2).first;
  SharpResult out;
  out.value = (e1 * q2 - e2 * q1) / (e1 - e2);
  out.maximizer = quotient(5e-5).second;
  return out;
}

SharpResult with_refinement(std::size_t n, const ConstantsOptions& opt,
                            const std::function<SharpResult(std::size_t)>& at) {
  SharpResult base = at(n);
  if (opt.check_refinement) {
    const SharpResult fine = at(2 * n);
    base.refinement_change = std::abs(fine.value / base.value - 1.0);
    if (base.refinement_change > 1e-3)
      throw NonConvergence("sharp constant changes by " + std::to_string(base.refinement_change) +
                           " under grid doubling");
  }
  return base;
}

}  // namespace

SharpResult sharp_kh(const ConstantsOptions& opt) {
  return with_refinement(opt.n, opt, [&](std::size_t n) { return kh_at(n, opt.max_seconds); });
}

SharpResult sharp_kgn(double p, const ConstantsOptions& opt) {
  if (!(p > 10.0 / 3.0 && p <= 6.0)) throw std::invalid_argument("sharp_kgn: p must lie in (10/3, 6]");
  if (p == 6.0) return with_refinement(opt.n, opt, [](std::size_t n) { return kgn_critical(n); });
  return with_refinement(opt.n, opt,
                         [&](std::size_t n) { return kgn_at(p, n, opt.max_seconds); });
}

SharpConstants thresholds(const ProblemParams& prm, double K_GN, double K_H) {
  if (!(K_GN > 0.0 && K_H > 0.0)) throw std::invalid_argument("thresholds: constants must be positive");
  const double p = prm.p, sigma = prm.sigma();
  SharpConstants s;
  s.gamma = prm.gamma;
  s.a = prm.a;
  s.p = p;
  s.K_GN = K_GN;
  s.K_H = K_H;
  // The gate constants only exist in the two-branch regime gamma > 0, a > 0.
  const double nan = std::numeric_limits<double>::quiet_NaN();
  s.M = prm.a > 0.0 ? p / (prm.a * sigma * (sigma - 1.0) * K_GN) : nan;
  s.N = prm.gamma > 0.0 ? 4.0 * (sigma - 2.0) / (prm.gamma * (sigma - 1.0) * K_H) : nan;
  s.c1 = std::pow(s.N, (3.0 * p - 10.0) / (4.0 * (p - 3.0))) * std::pow(s.M, 1.0 / (2.0 * (p - 3.0)));
  s.k0 = 1.0 / (s.N * s.N);
  s.k1 = s.k0 * s.c1 * s.c1 * s.c1;
  if (p == 6.0 && prm.a > 0.0) s.crit_level = 1.0 / (3.0 * std::sqrt(prm.a * K_GN));
  return s;
}

namespace {

std::mutex cache_mutex;

std::string cache_key(const ProblemParams& prm) {
  std::ostringstream os;
  os.precision(17);
  os << "gamma=" << prm.gamma << ",a=" << prm.a << ",p=" << prm.p;
  return os.str();
}

}  // namespace

SharpConstants compute_constants(const ProblemParams& prm, const std::string& cache_path,
                                 const ConstantsOptions& opt) {
  using nlohmann::json;
  const std::string key = cache_key(prm);
  if (!cache_path.empty()) {
    std::lock_guard lock(cache_mutex);
    std::ifstream in(cache_path);
    if (in) {
      json doc = json::parse(in, nullptr, false);
      if (!doc.is_discarded() && doc.contains(key) && doc[key].value("n", 0) == static_cast<int>(opt.n))
        return thresholds(prm, doc[key]["K_GN"].get<double>(), doc[key]["K_H"].get<double>());
    }
  }
  const double kgn = sharp_kgn(prm.p, opt).value;
  const double kh = sharp_kh(opt).value;
  if (!cache_path.empty()) {
    std::lock_guard lock(cache_mutex);
    json doc = json::object();
    if (std::ifstream in(cache_path); in) {
      json old = json::parse(in, nullptr, false);
      if (!old.is_discarded() && old.is_object()) doc = old;
    }
    doc[key] = {{"gamma", prm.gamma}, {"a", prm.a}, {"p", prm.p}, {"K_GN", kgn}, {"K_H", kh},
                {"n", opt.n}};
    std::ofstream(cache_path) << doc.dump(2) << "\n";
  }
  return thresholds(prm, kgn, kh);
}

}  // namespace sps
