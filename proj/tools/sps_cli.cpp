#include <CLI11.hpp>

#include <fstream>
#include <iostream>
#include <optional>

#include "acceptance_suite.hpp"
#include "sps/bubbles.hpp"
#include "sps/config.hpp"
#include "sps/errors.hpp"
#include "sps/report.hpp"
#include "sps/simd.hpp"
#include "sps/solvers.hpp"
#include "sps/sweep.hpp"

using namespace sps;

namespace {

constexpr int kOk = 0, kSolverFailure = 1, kInvalidConfig = 2;

void emit(const Json& doc, const std::string& path) {
  if (path.empty()) {
    std::cout << doc.dump(2) << "\n";
    return;
  }
  std::ofstream out(path);
  if (!out) throw InvalidConfig("cannot write " + path);
  out << doc.dump(2) << "\n";
}

// Problem flags shared by several subcommands; explicit flags override the config file.
struct ProblemFlags {
  std::string config;
  double gamma = 1, a = 1, p = 4, c = 0, c_frac = 0;
  std::size_t n = 0;
  std::string cache;
  CLI::Option *o_gamma{}, *o_a{}, *o_p{}, *o_c{}, *o_frac{}, *o_n{};

  void attach(CLI::App* sub) {
    sub->add_option("--config", config, "key = value run file");
    o_gamma = sub->add_option("--gamma", gamma, "Hartree coupling");
    o_a = sub->add_option("--a", a, "local coupling");
    o_p = sub->add_option("--p", p, "local exponent, 10/3 < p <= 6");
    o_c = sub->add_option("--c", c, "mass");
    o_frac = sub->add_option("--c-frac", c_frac, "mass as a fraction of c1");
    o_n = sub->add_option("--n", n, "grid nodes");
    sub->add_option("--cache", cache, "sharp-constant cache file");
  }

  RunConfig resolve() const {
    RunConfig rc = config.empty() ? RunConfig{} : load_config(config);
    auto& prm = rc.sweep.params;
    if (o_gamma->count()) prm.gamma = gamma;
    if (o_a->count()) prm.a = a;
    if (o_p->count()) prm.p = p;
    if (o_c->count()) rc.c = c;
    if (o_n->count()) rc.sweep.solver.n = n;
    if (!cache.empty()) rc.sweep.cache = cache;
    if (o_c->count() && o_frac->count()) throw InvalidConfig("--c and --c-frac are exclusive");
    return rc;
  }
};

int cmd_constants(const ProblemFlags& f, const std::string& out) {
  const RunConfig rc = f.resolve();
  ConstantsOptions co;
  co.n = rc.sweep.solver.n;
  const SharpConstants k = compute_constants(rc.sweep.params, rc.sweep.cache, co);
  emit(document(Json{{"params", to_json(rc.sweep.params)}, {"n", co.n}}, to_json(k)), out);
  return kOk;
}

int cmd_solve(const ProblemFlags& f, std::string branch, bool profile, const std::string& out) {
  RunConfig rc = f.resolve();
  ProblemParams prm = rc.sweep.params;
  const SolverConfig& cfg = rc.sweep.solver;
  const SharpConstants k = compute_constants(prm, rc.sweep.cache);
  const bool pair = prm.gamma > 0 && prm.a > 0;
  if (f.o_frac->count()) {
    if (!pair) throw InvalidConfig("--c-frac needs gamma > 0 and a > 0");
    prm.c = f.c_frac * k.c1;
  } else {
    prm.c = rc.c > 0 ? rc.c : pair ? 0.5 * k.c1 : 1.0;
  }
  prm.validate();
  if (branch.empty()) branch = rc.branch;
  if (branch == "auto") branch = pair ? "both" : "global";

  Json results = Json::array();
  if (branch == "plus" || branch == "both") results.push_back(to_json(solve_plus(prm, k, cfg), profile));
  if (branch == "minus" || branch == "both") results.push_back(to_json(solve_minus(prm, k, cfg), profile));
  if (branch == "global") {
    if (!(prm.gamma > 0 && prm.a < 0)) throw InvalidConfig("global branch needs gamma > 0 > a");
    results.push_back(to_json(solve_global(prm, cfg), profile));
  }
  if (results.empty()) throw InvalidConfig("unknown branch: " + branch);
  emit(document(Json{{"params", to_json(prm)}, {"solver", to_json(cfg)}, {"branch", branch}},
                Json{{"constants", to_json(k)}, {"solutions", results}}),
       out);
  return kOk;
}

int cmd_sweep(const std::string& path, std::size_t threads) {
  RunConfig rc = load_config(path);
  if (threads) rc.sweep.threads = threads;
  const SweepReport rep = run_sweep(rc.sweep);  // writes <output>.json/.csv when set
  if (rc.sweep.output.empty()) std::cout << document(to_json(rep.spec), to_json(rep)).dump(2) << "\n";
  bool any_failed = false;
  for (const auto& p : rep.points)
    any_failed = any_failed || (rep.two_branch ? !(p.plus.ok && p.minus.ok) : !p.global.ok);
  return any_failed ? kSolverFailure : kOk;
}

int cmd_bubbles(const ProblemFlags& f, std::vector<double> eps, const std::string& out) {
  RunConfig rc = f.resolve();
  ProblemParams prm = rc.sweep.params;
  if (!f.o_p->count() && f.config.empty()) prm.p = 6.0;
  if (!f.o_n->count() && f.config.empty()) rc.sweep.solver.n = 8192;
  if (prm.p != 6.0 || !(prm.gamma > 0 && prm.a > 0))
    throw InvalidConfig("bubbles: the interaction study needs gamma, a > 0 and p = 6");
  const SharpConstants k = compute_constants(prm, rc.sweep.cache);
  prm.c = f.o_frac->count() ? f.c_frac * k.c1 : rc.c > 0 ? rc.c : 0.8 * k.c1;
  prm.validate();
  const SolverConfig& cfg = rc.sweep.solver;
  const BubbleEstimates be = verify_bubble_estimates({0.1, 0.05, 0.025, 0.0125}, make_grid(cfg.n, 2.5));
  const BranchResult up = solve_plus(prm, k, cfg);
  const InteractionStudy st = interaction_study(prm, up.u, *k.crit_level, eps);
  Json res{{"constants", to_json(k)},
           {"sobolev_target", std::sqrt(1.0 / k.K_GN)},
           {"estimates", to_json(be)},
           {"gamma_plus", up.energy},
           {"interaction", to_json(st)}};
  emit(document(Json{{"params", to_json(prm)}, {"n", cfg.n}, {"epsilons", eps}}, res), out);
  return kOk;
}

int cmd_regimes(std::size_t n, const std::string& cache, const std::string& out) {
  SolverConfig cfg;
  if (n) cfg.n = n;
  const auto rows = regime_table(default_regimes(), cfg, cache);
  bool all = true;
  for (const auto& r : rows) {
    std::cerr << (r.match ? "match    " : "MISMATCH ") << "(" << r.input.gamma << ", " << r.input.a
              << ", " << r.input.p << ") c=" << r.c << ": predicted " << r.predicted
              << ", observed " << r.observed << "\n";
    all = all && r.match;
  }
  emit(document(Json{{"solver", to_json(cfg)}}, to_json(rows)), out);
  return all ? kOk : kSolverFailure;
}

int cmd_check(const acceptance::Options& opt) {
  const auto results = acceptance::run_all(opt, std::cout);
  std::size_t passed = 0;
  for (const auto& r : results) passed += r.pass;
  std::cout << passed << "/" << results.size() << " criteria passed" << std::endl;
  return passed == results.size() ? kOk : kSolverFailure;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Radial solver for normalized Schrodinger-Poisson-Slater states"};
  app.require_subcommand(1);
  std::string isa;
  app.add_option("--isa", isa, "force the kernel ISA")->check(CLI::IsMember({"scalar", "avx2"}));

  std::string out;
  ProblemFlags pf_const, pf_solve, pf_bub;

  auto* c_const = app.add_subcommand("constants", "sharp constants and thresholds");
  pf_const.attach(c_const);
  c_const->add_option("-o,--output", out, "JSON output file (default stdout)");

  auto* c_solve = app.add_subcommand("solve", "one regime at one mass");
  pf_solve.attach(c_solve);
  std::string branch;
  bool profile = false;
  c_solve->add_option("--branch", branch, "plus | minus | both | global | auto")
      ->check(CLI::IsMember({"plus", "minus", "both", "global", "auto"}));
  c_solve->add_flag("--profile", profile, "include r and u arrays");
  c_solve->add_option("-o,--output", out, "JSON output file (default stdout)");

  auto* c_sweep = app.add_subcommand("sweep", "mass sweep from a config file");
  std::string sweep_cfg;
  std::size_t threads = 0;
  c_sweep->add_option("config", sweep_cfg, "key = value run file")->required();
  c_sweep->add_option("--threads", threads, "worker threads (default: config or all cores)");

  auto* c_bub = app.add_subcommand("bubbles", "bubble expansions and interaction margins");
  pf_bub.attach(c_bub);
  std::vector<double> eps{0.05, 0.025, 0.0125};
  c_bub->add_option("--eps", eps, "bubble scales")->delimiter(',');
  c_bub->add_option("-o,--output", out, "JSON output file (default stdout)");

  auto* c_reg = app.add_subcommand("regimes", "predicted vs observed outcome per sign pattern");
  std::size_t reg_n = 0;
  std::string reg_cache;
  c_reg->add_option("--n", reg_n, "grid nodes");
  c_reg->add_option("--cache", reg_cache, "sharp-constant cache file");
  c_reg->add_option("-o,--output", out, "JSON output file (default stdout)");

  auto* c_check = app.add_subcommand("check", "run the acceptance criteria");
  acceptance::Options chk;
  c_check->add_option("--n", chk.n, "grid nodes for p < 6");
  c_check->add_option("--n-crit", chk.n_crit, "grid nodes for p = 6");
  c_check->add_option("--threads", chk.threads, "sweep worker threads");
  c_check->add_option("--cache", chk.cache, "sharp-constant cache file");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? kOk : kInvalidConfig;
  }

  try {
    if (isa == "scalar") simd::force_isa(simd::Isa::scalar);
    if (isa == "avx2") simd::force_isa(simd::Isa::avx2);
    if (*c_const) return cmd_constants(pf_const, out);
    if (*c_solve) return cmd_solve(pf_solve, branch, profile, out);
    if (*c_sweep) return cmd_sweep(sweep_cfg, threads);
    if (*c_bub) return cmd_bubbles(pf_bub, eps, out);
    if (*c_reg) return cmd_regimes(reg_n, reg_cache, out);
    if (*c_check) return cmd_check(chk);
  } catch (const SolverError& e) {
    std::cerr << "solver error: " << e.what() << "\n";
    return kSolverFailure;
  } catch (const std::invalid_argument& e) {
    std::cerr << "invalid configuration: " << e.what() << "\n";
    return kInvalidConfig;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kSolverFailure;
  }
  return kOk;
}
