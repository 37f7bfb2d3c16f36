#include <cmath>
#include <cstdio>
#include <numbers>

#include "sps/descent.hpp"
#include "sps/simd.hpp"

namespace sps {

namespace {

constexpr double kFourPi = 4.0 * std::numbers::pi;

// Vector layout: nodes 0..n-1 (last pinned at 0), then lambda.
using Vec = std::vector<double>;

struct System {
  const RadialGrid& g;
  const ProblemParams& prm;
  double c;
  const simd::Kernels& k = simd::active();

  double dot(const Vec& x, const Vec& y) const {
    return kFourPi * k.wdot(g.w.data(), x.data(), y.data(), g.n) + c * x[g.n] * y[g.n];
  }
  double norm(const Vec& x) const { return std::sqrt(dot(x, x)); }
};

// Frozen state of one Newton step.
struct Linearization {
  RadialFunction u;
  double lambda = 0.0;
  std::vector<double> phi, dpow;
  std::vector<double> lo, di, up;  // preconditioner LU (Thomas form)
  std::vector<double> vol;
  std::vector<double> pu;          // P u
  double upu = 0.0;                // <u, P u>
};

Vec residual(const System& sys, const RadialFunction& u, double lambda) {
  const std::size_t n = sys.g.n;
  RadialFunction gr = h1_gradient(u, sys.prm);
  Vec r(n + 1);
  const auto& gv = gr.values();
  for (std::size_t i = 0; i < n; ++i) r[i] = gv[i] + lambda * u[i];
  r[n - 1] = 0.0;
  r[n] = (u.mass() - sys.c) / (2.0 * sys.c);
  return r;
}

void build_preconditioner(const System& sys, Linearization& L) {
  const RadialGrid& g = sys.g;
  const std::size_t m = g.n - 1;
  const double mu = std::max(std::abs(L.lambda), std::pow(std::numbers::pi / g.r_max, 2));
  L.lo.assign(m, 0.0);
  L.di.assign(m, 0.0);
  L.up.assign(m, 0.0);
  L.vol.assign(m, 0.0);
  auto face = [&](std::size_t i) { return 0.5 * (g.r[i] + g.r[i + 1]); };
  for (std::size_t i = 0; i < m; ++i) {
    const double fl = i == 0 ? 0.0 : face(i - 1);
    const double fr = face(i);
    L.vol[i] = (fr * fr * fr - fl * fl * fl) / 3.0;
    const double kr = fr * fr / (g.r[i + 1] - g.r[i]);
    const double kl = i == 0 ? 0.0 : fl * fl / (g.r[i] - g.r[i - 1]);
    L.di[i] = kl + kr + mu * L.vol[i];
    if (i > 0) L.lo[i] = -kl;
    if (i + 1 < m) L.up[i] = -kr;
  }
  for (std::size_t i = 1; i < m; ++i) {
    L.lo[i] /= L.di[i - 1];
    L.di[i] -= L.lo[i] * L.up[i - 1];
  }
}

Vec apply_tridiag_inverse(const System& sys, const Linearization& L, const std::vector<double>& b) {
  const std::size_t n = sys.g.n, m = n - 1;
  Vec y(m);
  y[0] = b[0] * L.vol[0];
  for (std::size_t i = 1; i < m; ++i) y[i] = b[i] * L.vol[i] - L.lo[i] * y[i - 1];
  Vec x(n, 0.0);
  x[m - 1] = y[m - 1] / L.di[m - 1];
  for (std::size_t i = m - 1; i-- > 0;) x[i] = (y[i] - L.up[i] * x[i + 1]) / L.di[i];
  return x;
}

// Bordered preconditioner: Schur complement on the lambda row.
Vec precondition(const System& sys, const Linearization& L, const Vec& r) {
  const std::size_t n = sys.g.n;
  Vec y1 = apply_tridiag_inverse(sys, L, r);
  const double uy1 = kFourPi * sys.k.wdot(sys.g.w.data(), L.u.values().data(), y1.data(), n);
  const double nu = (uy1 - sys.c * r[n]) / L.upu;
  Vec z(n + 1);
  for (std::size_t i = 0; i < n; ++i) z[i] = y1[i] - nu * L.pu[i];
  z[n - 1] = 0.0;
  z[n] = nu;
  return z;
}

Vec jacobian(const System& sys, const Linearization& L, const Vec& x) {
  const std::size_t n = sys.g.n;
  const auto& u = L.u.values();
  std::vector<double> vv(x.begin(), x.begin() + static_cast<long>(n));
  vv[n - 1] = 0.0;
  RadialFunction v(L.u.grid_ptr(), vv);
  const auto lap = radial_laplacian(v);
  std::vector<double> uv(n);
  for (std::size_t i = 0; i < n; ++i) uv[i] = u[i] * vv[i];
  const auto dphi = newton_potential(sys.g, uv);
  const double ga = sys.prm.gamma, aa = sys.prm.a * (sys.prm.p - 1.0);
  Vec y(n + 1);
  for (std::size_t i = 0; i < n; ++i)
    y[i] = -lap[i] + L.lambda * vv[i] - ga * L.phi[i] * vv[i] - 2.0 * ga * dphi[i] * u[i] -
           aa * L.dpow[i] * vv[i] + x[n] * u[i];
  y[n - 1] = 0.0;
  y[n] = kFourPi * sys.k.wdot(sys.g.w.data(), u.data(), vv.data(), n) / sys.c;
  return y;
}

// Restarted GMRES with right preconditioning; returns x with J x ~ b.
Vec gmres(const System& sys, const Linearization& L, const Vec& b, double rtol, int restart,
          int max_it, int& used) {
  const std::size_t N = b.size();
  Vec x(N, 0.0);
  const double bnorm = sys.norm(b);
  if (bnorm == 0.0) return x;
  Vec r = b;
  used = 0;
  while (used < max_it) {
    const double beta = sys.norm(r);
    if (beta <= rtol * bnorm) break;
    const int m = restart;
    std::vector<Vec> V(1, r);
    for (double& e : V[0]) e /= beta;
    std::vector<Vec> Z;
    std::vector<std::vector<double>> H(m + 1, std::vector<double>(m, 0.0));
    std::vector<double> cs(m), sn(m), gvec(m + 1, 0.0);
    gvec[0] = beta;
    int j = 0;
    for (; j < m && used < max_it; ++j, ++used) {
      Z.push_back(precondition(sys, L, V[j]));
      Vec w = jacobian(sys, L, Z[j]);
      for (int i = 0; i <= j; ++i) {
        H[i][j] = sys.dot(w, V[i]);
        for (std::size_t q = 0; q < N; ++q) w[q] -= H[i][j] * V[i][q];
      }
      H[j + 1][j] = sys.norm(w);
      for (int i = 0; i < j; ++i) {
        const double t = cs[i] * H[i][j] + sn[i] * H[i + 1][j];
        H[i + 1][j] = -sn[i] * H[i][j] + cs[i] * H[i + 1][j];
        H[i][j] = t;
      }
      const double den = std::hypot(H[j][j], H[j + 1][j]);
      cs[j] = H[j][j] / den;
      sn[j] = H[j + 1][j] / den;
      const double hnext = H[j + 1][j];
      H[j][j] = den;
      H[j + 1][j] = 0.0;
      gvec[j + 1] = -sn[j] * gvec[j];
      gvec[j] = cs[j] * gvec[j];
      if (hnext != 0.0) {
        V.push_back(w);
        for (double& e : V.back()) e /= hnext;
      }
      if (std::abs(gvec[j + 1]) <= rtol * bnorm || hnext == 0.0) {
        ++j;
        ++used;
        break;
      }
    }
    std::vector<double> yv(j, 0.0);
    for (int i = j - 1; i >= 0; --i) {
      double s = gvec[i];
      for (int q = i + 1; q < j; ++q) s -= H[i][q] * yv[q];
      yv[i] = s / H[i][i];
    }
    for (int i = 0; i < j; ++i)
      for (std::size_t q = 0; q < N; ++q) x[q] += yv[i] * Z[i][q];
    r = b;
    const Vec Ax = jacobian(sys, L, x);
    for (std::size_t q = 0; q < N; ++q) r[q] -= Ax[q];
  }
  return x;
}

double grad_rel_of(const RadialFunction& u, const ProblemParams& prm, double* lambda_out) {
  const RadialFunction gr = h1_gradient(u, prm);
  const double D = u.mass();
  const double lam = -pairing(gr, u) / D;
  if (lambda_out) *lambda_out = lam;
  std::vector<double> res(gr.values());
  for (std::size_t i = 0; i < res.size(); ++i) res[i] += lam * u[i];
  res.back() = 0.0;
  const RadialFunction rf(u.grid_ptr(), std::move(res));
  return std::sqrt(rf.mass()) / (std::abs(lam) * std::sqrt(D));
}

}  // namespace

PolishResult newton_polish(RadialFunction u, double lambda, const ProblemParams& prm,
                           const PolishOptions& opt) {
  const RadialGrid& g = u.grid();
  const std::size_t n = g.n;
  System sys{g, prm, prm.c};
  PolishResult out;
  out.u = u;
  out.lambda = lambda;
  out.grad_rel = grad_rel_of(u, prm, nullptr);
  double F_prev = energy_breakdown(u, prm).F;

  Vec R = residual(sys, u, lambda);
  double rn = sys.norm(R);
  int stalls = 0;
  for (int it = 0; it < opt.max_newton; ++it) {
    if (out.grad_rel <= opt.tol) break;
    Linearization L;
    L.u = u;
    L.lambda = lambda;
    L.phi = poisson_potential(u).values();
    L.dpow.resize(n);
    for (std::size_t i = 0; i < n; ++i) {
      const double au = std::abs(u[i]);
      L.dpow[i] = au == 0.0 ? 0.0 : std::pow(au, prm.p - 2.0);
    }
    build_preconditioner(sys, L);
    L.pu = apply_tridiag_inverse(sys, L, u.values());
    L.upu = kFourPi * sys.k.wdot(g.w.data(), u.values().data(), L.pu.data(), n);

    Vec minusR(R);
    for (double& e : minusR) e = -e;
    int used = 0;
    const Vec dx = gmres(sys, L, minusR, 1e-6, opt.gmres_restart, opt.gmres_max, used);
    out.krylov_iterations += used;

    bool accepted = false;
    double alpha = 1.0;
    for (int ls = 0; ls < 30; ++ls, alpha *= 0.5) {
      std::vector<double> trial(u.values());
      for (std::size_t i = 0; i < n; ++i) trial[i] += alpha * dx[i];
      RadialFunction cand(u.grid_ptr(), std::move(trial));
      const double lam_c = lambda + alpha * dx[n];
      const Vec Rc = residual(sys, cand, lam_c);
      const double rc = sys.norm(Rc);
      if (rc < (1.0 - 1e-4 * alpha) * rn) {
        stalls = rc > 0.5 * rn ? stalls + 1 : 0;
        u = std::move(cand);
        lambda = lam_c;
        R = Rc;
        rn = rc;
        accepted = true;
        break;
      }
    }
    if (!accepted) break;
    ++out.newton_iterations;
    double lam_d = 0.0;
    const double gr = grad_rel_of(u, prm, &lam_d);
    if (opt.verbose)
      std::fprintf(stderr, "  newton %2d |R|=%.3e grad=%.3e lam=%.12g krylov=%d\n", it, rn, gr,
                   lambda, used);
    const EnergyBreakdown eb = energy_breakdown(u, prm);
    // Scaled by |F| + A: F itself can sit near zero while A is large.
    out.energy_change = std::abs(eb.F - F_prev) / (std::abs(eb.F) + eb.A);
    F_prev = eb.F;
    if (gr < out.grad_rel) {
      out.u = u;
      out.lambda = lam_d;
      out.grad_rel = gr;
      out.improved = true;
    }
    if (stalls >= 3) break;  // discretization round-off floor
  }
  return out;
}

}  // namespace sps
