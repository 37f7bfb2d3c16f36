#include "sps/sweep.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <fstream>
#include <sstream>
#include <thread>

#include "sps/errors.hpp"
#include "sps/report.hpp"

namespace sps {

BranchSummary summarize(const BranchResult& r) {
  BranchSummary s;
  s.ok = r.converged;
  s.energy = r.energy;
  s.lambda = r.lambda;
  s.lambda_direct = r.lambda_direct;
  s.A = r.e.A;
  s.B = r.e.B;
  s.C = r.e.C;
  s.q_rel = r.q_rel;
  s.eq_rel = r.eq_rel;
  s.grad_rel = r.grad_rel;
  s.residual = r.residual;
  s.min_interior = r.min_interior;
  s.r_max = r.u.grid().r_max;
  s.iterations = r.iterations;
  s.classification = to_string(r.classification);
  if (!r.converged) s.error = "not converged";
  return s;
}

namespace {

template <class F>
BranchSummary attempt(F&& f) {
  try {
    return summarize(f());
  } catch (const std::exception& e) {
    BranchSummary s;
    s.error = e.what();
    return s;
  }
}

template <class F>
void parallel_for(std::size_t count, std::size_t threads, F&& body) {
  if (threads == 0) threads = std::max(1u, std::thread::hardware_concurrency());
  threads = std::min(threads, count);
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i; (i = next.fetch_add(1)) < count;) body(i);
  };
  std::vector<std::thread> pool;
  for (std::size_t t = 1; t < threads; ++t) pool.emplace_back(worker);
  worker();
  for (auto& t : pool) t.join();
}

std::vector<double> log_grid(double lo, double hi, std::size_t n) {
  std::vector<double> v(n);
  for (std::size_t i = 0; i < n; ++i)
    v[i] = n == 1 ? lo : lo * std::pow(hi / lo, static_cast<double>(i) / static_cast<double>(n - 1));
  return v;
}

void note_fit(SweepReport& rep, const char* name, const LineFit& f) {
  if (f.flagged) rep.flagged.push_back(name);
}

// Points with successful entries for the given branch, the largest
// `exclude` values dropped.
template <class Get>
LineFit asymptotic_fit(const SweepReport& rep, Get&& get, double power_shift = 0.0) {
  std::vector<double> x, y;
  const std::size_t keep =
      rep.points.size() > rep.spec.fit_exclude ? rep.points.size() - rep.spec.fit_exclude : 0;
  for (std::size_t i = 0; i < keep; ++i) {
    const auto [ok, val] = get(rep.points[i]);
    if (!ok) continue;
    x.push_back(rep.points[i].c);
    y.push_back(val * std::pow(rep.points[i].c, power_shift));
  }
  if (x.size() < 2) return LineFit{0.0, 0.0, 0.0, 0.0, x.size(), true};
  return fit_loglog(x, y);
}

}  // namespace

SweepReport run_sweep(const SweepSpec& spec) {
  spec.params.validate();
  SweepReport rep;
  rep.spec = spec;
  rep.two_branch = spec.params.gamma > 0.0 && spec.params.a > 0.0;
  const bool global = spec.params.gamma > 0.0 && spec.params.a < 0.0;
  if (!rep.two_branch && !global)
    throw InvalidConfig("sweep: needs gamma > 0 and a != 0");
  rep.consts = compute_constants(spec.params, spec.cache);

  std::vector<double> cs = spec.c_values;
  if (cs.empty()) {
    if (spec.points == 0 || !(spec.c_lo > 0.0) || !(spec.c_hi > spec.c_lo))
      throw InvalidConfig("sweep: invalid default c-grid");
    const double scale = rep.two_branch ? rep.consts.c1 : 1.0;
    cs = log_grid(spec.c_lo * scale, spec.c_hi * scale, spec.points);
  }
  if (cs.empty() || !std::is_sorted(cs.begin(), cs.end()) || !(cs.front() > 0.0))
    throw InvalidConfig("sweep: c values must be positive and ascending");
  rep.spec.c_values = cs;

  rep.points.resize(cs.size());
  parallel_for(cs.size(), spec.threads, [&](std::size_t i) {
    ProblemParams prm = spec.params;
    prm.c = cs[i];
    SweepPoint& pt = rep.points[i];
    pt.c = cs[i];
    if (rep.two_branch) {
      std::optional<BranchResult> plus;
      pt.plus = attempt([&] {
        plus = solve_plus(prm, rep.consts, spec.solver);
        return *plus;
      });
      pt.minus = attempt([&] { return solve_minus(prm, rep.consts, spec.solver); });
    } else {
      pt.global = attempt([&] { return solve_global(prm, spec.solver); });
    }
  });

  if (rep.two_branch) {
    auto plus_l = [](const SweepPoint& p) { return std::pair{p.plus.ok, p.plus.lambda}; };
    auto plus_e = [](const SweepPoint& p) { return std::pair{p.plus.ok, p.plus.energy}; };
    auto minus_l = [](const SweepPoint& p) { return std::pair{p.minus.ok, p.minus.lambda}; };
    rep.lambda_plus_fit = asymptotic_fit(rep, plus_l);
    rep.gamma_plus_fit = asymptotic_fit(rep, plus_e);
    rep.lambda_minus_fit = asymptotic_fit(rep, minus_l);
    note_fit(rep, "lambda_plus", rep.lambda_plus_fit);
    note_fit(rep, "gamma_plus", rep.gamma_plus_fit);
    note_fit(rep, "lambda_minus", rep.lambda_minus_fit);
    for (const auto& p : rep.points) {
      if (p.plus.ok) {
        rep.K_lambda_plus = std::max(rep.K_lambda_plus, p.plus.lambda / (p.c * p.c));
        rep.K_gamma_plus = std::max(rep.K_gamma_plus, std::abs(p.plus.energy) / (p.c * p.c * p.c));
      }
      if (p.minus.ok)
        rep.K_lambda_minus = std::max(rep.K_lambda_minus, p.minus.lambda / std::sqrt(p.c));
    }
    if (rep.points.front().minus.ok) {
      rep.gamma_minus_smallest = rep.points.front().minus.energy;
      if (rep.consts.crit_level)
        rep.crit_gap = std::abs(rep.gamma_minus_smallest / *rep.consts.crit_level - 1.0);
    }
    rep.gamma_minus_monotone = true;
    for (std::size_t i = 1; i < rep.points.size(); ++i) {
      const auto& a = rep.points[i - 1].minus;
      const auto& b = rep.points[i].minus;
      const bool dec = a.ok && b.ok && b.energy < a.energy;
      rep.gamma_minus_decreasing.push_back(dec);
      rep.gamma_minus_monotone = rep.gamma_minus_monotone && dec;
    }
    if (spec.continuity) {
      ContinuityCheck& cc = rep.continuity;
      cc.c = std::sqrt(cs.front() * cs.back());
      ProblemParams prm = spec.params;
      prm.c = cc.c;
      try {
        const double base = solve_plus(prm, rep.consts, spec.solver).energy;
        for (int k = 0; k < 4; ++k) {
          const double d = 0.05 * cc.c / std::pow(2.0, k);
          prm.c = cc.c + d;
          cc.deltas.push_back(d);
          cc.diffs.push_back(std::abs(solve_plus(prm, rep.consts, spec.solver).energy - base));
        }
        cc.pass = true;
        for (std::size_t k = 1; k < cc.diffs.size(); ++k)
          cc.pass = cc.pass && cc.diffs[k] < cc.diffs[k - 1];
        cc.pass = cc.pass && cc.diffs.back() < cc.diffs.front() / 4.0;
      } catch (const std::exception&) {
        cc.pass = false;
      }
    }
  } else {
    std::vector<double> x, y;
    rep.m_negative = rep.lambda_positive = rep.explicit_bound = true;
    const double p = spec.params.p;
    const double kh = rep.consts.K_H, g = spec.params.gamma;
    for (const auto& pt : rep.points) {
      if (!pt.global.ok) {
        rep.m_negative = rep.lambda_positive = false;
        continue;
      }
      x.push_back(pt.c);
      y.push_back(pt.global.energy);
      rep.m_negative = rep.m_negative && pt.global.energy < 0.0;
      rep.lambda_positive = rep.lambda_positive && pt.global.lambda > 0.0;
      rep.explicit_bound = rep.explicit_bound &&
                           std::abs(pt.global.energy) <= g * g * kh * kh * std::pow(pt.c, 3) / 32.0;
      rep.K3 = std::max(rep.K3, pt.global.lambda / (pt.c * pt.c));
    }
    if (x.size() >= 2) {
      rep.m_fit = fit_loglog(x, y);
      note_fit(rep, "m", rep.m_fit);
      // Least squares |m|/c^3 = K1 + K2 c^{2p-6}, clamped to K >= 0, then
      // scaled so the envelope holds at every point.
      double s0 = 0, s1 = 0, s2 = 0, t0 = 0, t1 = 0;
      for (std::size_t i = 0; i < x.size(); ++i) {
        const double z = std::pow(x[i], 2.0 * p - 6.0), v = std::abs(y[i]) / std::pow(x[i], 3);
        s0 += 1;
        s1 += z;
        s2 += z * z;
        t0 += v;
        t1 += v * z;
      }
      const double det = s0 * s2 - s1 * s1;
      double k1 = (s2 * t0 - s1 * t1) / det, k2 = (s0 * t1 - s1 * t0) / det;
      if (k2 < 0.0) {
        k2 = 0.0;
        k1 = t0 / s0;
      }
      if (k1 < 0.0) {
        k1 = 0.0;
        k2 = t1 / s2;
      }
      double scale = 1.0;
      for (std::size_t i = 0; i < x.size(); ++i) {
        const double env = k1 * std::pow(x[i], 3) + k2 * std::pow(x[i], 2 * p - 3);
        scale = std::max(scale, std::abs(y[i]) / env);
      }
      rep.K1 = k1 * scale;
      rep.K2 = k2 * scale;
    }
  }
  if (!spec.output.empty()) write_sweep(rep, spec.output);
  return rep;
}

void write_sweep(const SweepReport& rep, const std::string& base) {
  std::ofstream(base + ".json") << document(to_json(rep.spec), to_json(rep)).dump(2) << "\n";
  std::ofstream csv(base + ".csv");
  csv.precision(17);
  if (rep.two_branch) {
    csv << "c,gamma_plus,gamma_minus,lambda_plus,lambda_minus\n";
    for (const auto& p : rep.points)
      csv << p.c << "," << p.plus.energy << "," << p.minus.energy << "," << p.plus.lambda << ","
          << p.minus.lambda << "\n";
  } else {
    csv << "c,m,lambda\n";
    for (const auto& p : rep.points)
      csv << p.c << "," << p.global.energy << "," << p.global.lambda << "\n";
  }
}

std::vector<RegimeCase> default_regimes() {
  return {
      {1.0, 1.0, 4.0, 0.5, true},
      {1.0, 1.0, 6.0, 0.5, true},
      {1.0, -1.0, 5.0, 1.0, false},
      {-1.0, -1.0, 4.0, 1.0, false},
      {-1.0, 1.0, 6.0, 1.0, false},
  };
}

std::vector<RegimeRow> regime_table(const std::vector<RegimeCase>& cases, const SolverConfig& cfg,
                                    const std::string& cache) {
  std::vector<RegimeRow> rows;
  for (const RegimeCase& rc : cases) {
    RegimeRow row;
    row.input = rc;
    ProblemParams prm{rc.gamma, rc.a, rc.p, rc.c};
    std::ostringstream detail;
    detail.precision(6);
    try {
      const SharpConstants k = compute_constants(prm, cache);
      if (rc.c_fraction_of_c1) {
        if (!(k.c1 > 0.0)) throw InvalidConfig("regime: c as a fraction of c1 needs gamma, a > 0");
        prm.c = rc.c * k.c1;
      }
      prm.validate();
      row.c = prm.c;
      if (prm.gamma > 0.0 && prm.a > 0.0) {
        const bool below = prm.c < k.c1;
        row.predicted = below ? "two solutions" : "not covered (c >= c1)";
        const BranchResult up = solve_plus(prm, k, cfg);
        const BranchResult um = solve_minus(prm, k, cfg);
        const bool two = up.converged && um.converged && up.lambda > 0.0 && um.lambda > 0.0 &&
                         up.energy < um.energy;
        row.observed = two ? "two solutions" : "incomplete";
        detail << "gamma+=" << up.energy << " gamma-=" << um.energy << " lambda+=" << up.lambda
               << " lambda-=" << um.lambda;
        row.match = below ? two : true;
      } else if (prm.gamma > 0.0 && prm.a < 0.0) {
        row.predicted = "global min";
        const BranchResult g = solve_global(prm, cfg);
        const bool ok = g.converged && g.energy < 0.0 && g.lambda > 0.0;
        row.observed = ok ? "global min" : "incomplete";
        detail << "m=" << g.energy << " lambda=" << g.lambda;
        row.match = ok;
      } else if (prm.gamma < 0.0 && prm.a < 0.0) {
        row.predicted = "none";
        const NonexistenceReport nr = nonexistence_probe(prm, k, 100, cfg);
        row.observed = nr.monotone ? "none" : "non-monotone fiber";
        detail << "min g'/sqrt(A)=" << nr.min_dg;
        row.match = nr.monotone;
      } else if (prm.gamma < 0.0 && prm.a > 0.0 && prm.p == 6.0) {
        row.predicted = "no positive";
        SolverConfig pc = cfg;
        pc.max_seconds = std::min(cfg.max_seconds, 20.0);
        const NonexistenceReport nr = nonexistence_probe(prm, k, 4, pc);
        const bool ok = nr.above_threshold && nr.lambda_negative;
        row.observed = ok ? "no positive" : "low-energy candidate";
        detail << "min F on Lambda=" << nr.min_energy << " crit=" << nr.crit_level;
        row.match = ok;
      } else {
        row.predicted = "not covered";
        row.observed = "-";
        row.match = true;
      }
    } catch (const std::exception& e) {
      row.observed = std::string("error: ") + e.what();
      row.match = false;
    }
    row.detail = detail.str();
    rows.push_back(std::move(row));
  }
  return rows;
}

}  // namespace sps
