#include "sps/radial.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

#include "sps/simd.hpp"

namespace sps {

namespace {

constexpr double kFourPi = 4.0 * std::numbers::pi;
constexpr int kHalf = 3;  // stencil half-width

constexpr std::array<double, 7> kD1 = {-1.0 / 60, 9.0 / 60, -45.0 / 60, 0.0,
                                       45.0 / 60, -9.0 / 60, 1.0 / 60};
constexpr std::array<double, 7> kD2 = {2.0 / 180,    -27.0 / 180, 270.0 / 180, -490.0 / 180,
                                       270.0 / 180, -27.0 / 180, 2.0 / 180};

// Values at index positions -kHalf .. n+kHalf. Position 0 is the origin; the
// left ghosts mirror the nodes (u is even in s for both maps) and the right
// ghosts reflect oddly about the last node.
std::vector<double> extended(const RadialFunction& u) {
  const RadialGrid& g = u.grid();
  const std::size_t n = g.n;
  const auto& v = u.values();
  std::vector<double> e(n + 1 + 2 * kHalf);
  const double u0 = value_at_origin(u);
  auto at = [&](long i) -> double& { return e[static_cast<std::size_t>(i + kHalf)]; };
  at(0) = u0;
  for (std::size_t i = 1; i <= n; ++i) at(static_cast<long>(i)) = v[i - 1];
  for (long k = 1; k <= kHalf; ++k) {
    at(-k) = v[static_cast<std::size_t>(k - 1)];
    at(static_cast<long>(n) + k) = 2.0 * v[n - 1] - v[n - 1 - static_cast<std::size_t>(k)];
  }
  return e;
}

std::vector<double> simpson_weights(const std::vector<double>& r) {
  // Composite Simpson for \int F dr over x_0 = 0, x_1..x_n, exact for
  // quadratics on every panel; an odd trailing interval reuses the last three
  // nodes. Returned weights still multiply F = f r^2.
  const std::size_t n = r.size();
  std::vector<double> x(n + 1);
  x[0] = 0.0;
  std::copy(r.begin(), r.end(), x.begin() + 1);
  std::vector<double> W(n + 1, 0.0);
  std::size_t j = 0;
  for (; j + 2 <= n; j += 2) {
    const double h1 = x[j + 1] - x[j], h2 = x[j + 2] - x[j + 1], hs = h1 + h2;
    W[j] += hs / 6.0 * (2.0 - h2 / h1);
    W[j + 1] += hs * hs * hs / (6.0 * h1 * h2);
    W[j + 2] += hs / 6.0 * (2.0 - h1 / h2);
  }
  if (j < n) {
    const double h1 = x[n - 1] - x[n - 2], h2 = x[n] - x[n - 1];
    W[n - 2] += -h2 * h2 * h2 / (6.0 * h1 * (h1 + h2));
    W[n - 1] += h2 * (h2 + 3.0 * h1) / (6.0 * h1);
    W[n] += h2 * (2.0 * h2 + 3.0 * h1) / (6.0 * (h1 + h2));
  }
  std::vector<double> w(n);
  for (std::size_t i = 0; i < n; ++i) w[i] = W[i + 1] * r[i] * r[i];
  return w;
}

// Integral of the cubic through f at index positions (k0..k0+3) over the
// interval [k, k+1], on a uniform index spacing h.
double cubic_piece(const std::vector<double>& f, std::size_t k, std::size_t n, double h) {
  if (k == 0) return h * (9.0 * f[0] + 19.0 * f[1] - 5.0 * f[2] + f[3]) / 24.0;
  if (k + 1 == n) return h * (f[n - 3] - 5.0 * f[n - 2] + 19.0 * f[n - 1] + 9.0 * f[n]) / 24.0;
  return h * (-f[k - 1] + 13.0 * f[k] + 13.0 * f[k + 1] - f[k + 2]) / 24.0;
}

}  // namespace

double RadialGrid::s_of(double radius) const {
  const double x = radius / r_max;
  return spacing == Spacing::uniform ? x : std::sqrt(std::max(x, 0.0));
}

GridPtr make_grid(std::size_t n, double r_max, Spacing spacing) {
  if (n < 16) throw std::invalid_argument("make_grid: need at least 16 nodes");
  if (!(r_max > 0.0) || !std::isfinite(r_max))
    throw std::invalid_argument("make_grid: radius must be positive");
  auto g = std::make_shared<RadialGrid>();
  g->spacing = spacing;
  g->n = n;
  g->r_max = r_max;
  g->h = 1.0 / static_cast<double>(n);
  g->s.resize(n);
  g->r.resize(n);
  g->dr_ds.resize(n);
  g->d2r_ds2.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    const double s = static_cast<double>(i + 1) / static_cast<double>(n);
    g->s[i] = s;
    if (spacing == Spacing::uniform) {
      g->r[i] = r_max * s;
      g->dr_ds[i] = r_max;
      g->d2r_ds2[i] = 0.0;
    } else {
      g->r[i] = r_max * s * s;
      g->dr_ds[i] = 2.0 * r_max * s;
      g->d2r_ds2[i] = 2.0 * r_max;
    }
  }
  g->r[n - 1] = r_max;
  g->w = simpson_weights(g->r);

  // Lagrange weights at x = 0 in the variable x = r^2 through the first four nodes.
  std::array<double, 4> x{};
  for (int k = 0; k < 4; ++k) x[k] = g->r[k] * g->r[k];
  for (int k = 0; k < 4; ++k) {
    double L = 1.0;
    for (int m = 0; m < 4; ++m)
      if (m != k) L *= (0.0 - x[m]) / (x[k] - x[m]);
    g->origin[k] = L;
  }
  return g;
}

RadialFunction::RadialFunction(GridPtr grid, bool dirichlet)
    : grid_(std::move(grid)), values_(grid_->n, 0.0), dirichlet_(dirichlet) {}

RadialFunction::RadialFunction(GridPtr grid, std::vector<double> values, bool dirichlet)
    : grid_(std::move(grid)), values_(std::move(values)), dirichlet_(dirichlet) {
  check();
}

void RadialFunction::check() {
  if (!grid_) throw std::invalid_argument("RadialFunction: null grid");
  if (values_.size() != grid_->n) throw std::invalid_argument("RadialFunction: size mismatch");
  for (double v : values_)
    if (!std::isfinite(v)) throw std::invalid_argument("RadialFunction: non-finite value");
  if (dirichlet_) values_.back() = 0.0;
}

double RadialFunction::mass() const {
  if (!norm_cached_) {
    mass_ = kFourPi * simd::active().wdot(grid_->w.data(), values_.data(), values_.data(),
                                          values_.size());
    norm_cached_ = true;
  }
  return mass_;
}

void RadialFunction::normalize_mass(double target) {
  const double m = mass();
  if (!(m > 0.0)) throw std::invalid_argument("normalize_mass: zero profile");
  scale(std::sqrt(target / m));
}

void RadialFunction::scale(double factor) {
  for (double& v : values_) v *= factor;
  norm_cached_ = false;
}

double integrate(const RadialGrid& g, std::span<const double> f) {
  return simd::active().wsum(g.w.data(), f.data(), g.n);
}

double integrate(const RadialGrid& g, std::span<const double> f, std::span<const double> h) {
  return simd::active().wdot(g.w.data(), f.data(), h.data(), g.n);
}

double value_at_origin(const RadialFunction& u) {
  const auto& o = u.grid().origin;
  const auto& v = u.values();
  return o[0] * v[0] + o[1] * v[1] + o[2] * v[2] + o[3] * v[3];
}

std::vector<double> radial_derivative(const RadialFunction& u) {
  const RadialGrid& g = u.grid();
  const auto e = extended(u);
  std::vector<double> d(g.n);
  for (std::size_t i = 0; i < g.n; ++i) {
    const std::size_t c = i + 1 + kHalf;
    double us = 0.0;
    for (int k = -kHalf; k <= kHalf; ++k) us += kD1[k + kHalf] * e[c + k];
    d[i] = us / (g.h * g.dr_ds[i]);
  }
  return d;
}

std::vector<double> radial_laplacian(const RadialFunction& u) {
  const RadialGrid& g = u.grid();
  const auto e = extended(u);
  std::vector<double> lap(g.n);
  for (std::size_t i = 0; i < g.n; ++i) {
    const std::size_t c = i + 1 + kHalf;
    double us = 0.0, uss = 0.0;
    for (int k = -kHalf; k <= kHalf; ++k) {
      us += kD1[k + kHalf] * e[c + k];
      uss += kD2[k + kHalf] * e[c + k];
    }
    us /= g.h;
    uss /= g.h * g.h;
    const double rs = g.dr_ds[i];
    lap[i] = (uss - g.d2r_ds2[i] / rs * us) / (rs * rs) + 2.0 * us / (g.r[i] * rs);
  }
  return lap;
}

Interpolant::Interpolant(const RadialFunction& u) : grid_(&u.grid()) {
  const RadialGrid& g = *grid_;
  const std::size_t n = g.n;
  const auto e = extended(u);
  val_.resize(n + 1);
  der_.resize(n + 1);
  val_[0] = e[kHalf];
  der_[0] = 0.0;
  for (std::size_t i = 1; i <= n; ++i) {
    val_[i] = e[i + kHalf];
    double us = 0.0;
    for (int k = -kHalf; k <= kHalf; ++k) us += kD1[k + kHalf] * e[i + kHalf + k];
    der_[i] = us / g.h;
  }
  // Fritsch-Carlson style limiting where the data is locally monotone.
  for (std::size_t i = 1; i < n; ++i) {
    const double dl = (val_[i] - val_[i - 1]) / g.h;
    const double dr = (val_[i + 1] - val_[i]) / g.h;
    if (dl * dr <= 0.0) continue;
    if (der_[i] * dl < 0.0) {
      der_[i] = 0.0;
      continue;
    }
    const double cap = 3.0 * std::min(std::abs(dl), std::abs(dr));
    if (std::abs(der_[i]) > cap) der_[i] = std::copysign(cap, dl);
  }
}

double Interpolant::operator()(double radius) const {
  const RadialGrid& g = *grid_;
  if (radius >= g.r_max) return 0.0;
  const double s = g.s_of(std::abs(radius));
  const double pos = s / g.h;
  std::size_t j = static_cast<std::size_t>(pos);
  if (j >= g.n) return 0.0;
  const double t = pos - static_cast<double>(j);
  const double t2 = t * t, t3 = t2 * t;
  const double h00 = 2 * t3 - 3 * t2 + 1, h10 = t3 - 2 * t2 + t;
  const double h01 = -2 * t3 + 3 * t2, h11 = t3 - t2;
  return h00 * val_[j] + h10 * g.h * der_[j] + h01 * val_[j + 1] + h11 * g.h * der_[j + 1];
}

std::vector<double> newton_potential(const RadialGrid& g, std::span<const double> rho) {
  const std::size_t n = g.n;
  // Integrands in the index coordinate, position 0 being the origin where both vanish.
  std::vector<double> f1(n + 1, 0.0), f2(n + 1, 0.0);
  for (std::size_t i = 0; i < n; ++i) {
    const double q = rho[i] * g.dr_ds[i];
    f1[i + 1] = g.r[i] * g.r[i] * q;
    f2[i + 1] = g.r[i] * q;
  }
  std::vector<double> inner(n + 1, 0.0), outer(n + 1, 0.0);
  for (std::size_t k = 0; k < n; ++k) {
    inner[k + 1] = inner[k] + cubic_piece(f1, k, n, g.h);
    outer[k + 1] = outer[k] + cubic_piece(f2, k, n, g.h);
  }
  std::vector<double> phi(n);
  for (std::size_t i = 0; i < n; ++i)
    phi[i] = kFourPi * (inner[i + 1] / g.r[i] + (outer[n] - outer[i + 1]));
  return phi;
}

RadialFunction poisson_potential(const RadialFunction& u) {
  const auto& v = u.values();
  std::vector<double> rho(v.size());
  for (std::size_t i = 0; i < v.size(); ++i) rho[i] = v[i] * v[i];
  return RadialFunction(u.grid_ptr(), newton_potential(u.grid(), rho), false);
}

RadialFunction dilate(const RadialFunction& u, double t, double amp) {
  if (!(t > 0.0) || !std::isfinite(t)) throw std::invalid_argument("dilate: t must be positive");
  const RadialGrid& g = u.grid();
  if (t == 1.0) {
    RadialFunction out = u;
    out.scale(amp);
    return out;
  }
  const Interpolant ip(u);
  std::vector<double> out(g.n);
  for (std::size_t i = 0; i < g.n; ++i) out[i] = amp * ip(t * g.r[i]);
  return RadialFunction(u.grid_ptr(), std::move(out), u.dirichlet());
}

RadialFunction dilate(const RadialFunction& u, GridPtr target, double t, double amp) {
  if (!(t > 0.0) || !std::isfinite(t)) throw std::invalid_argument("dilate: t must be positive");
  const Interpolant ip(u);
  std::vector<double> out(target->n);
  for (std::size_t i = 0; i < target->n; ++i) out[i] = amp * ip(t * target->r[i]);
  return RadialFunction(std::move(target), std::move(out), u.dirichlet());
}

RadialFunction rescale_fiber(const RadialFunction& u, double t) {
  if (!(t > 0.0) || !std::isfinite(t))
    throw std::invalid_argument("rescale_fiber: t must be positive");
  return dilate(u, t, t * std::sqrt(t));
}

}  // namespace sps
