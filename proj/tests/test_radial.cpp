#include <doctest.h>

#include <cmath>
#include <numbers>

#include "oracles.hpp"
#include "sps/fiber.hpp"
#include "sps/functionals.hpp"
#include "sps/radial.hpp"

using namespace sps;
using std::numbers::pi;

TEST_CASE("grid construction") {
  CHECK_THROWS_AS(make_grid(8, 10.0), std::invalid_argument);
  CHECK_THROWS_AS(make_grid(64, 0.0), std::invalid_argument);
  for (auto sp : {Spacing::uniform, Spacing::graded}) {
    auto g = make_grid(256, 10.0, sp);
    CHECK(g->r.back() == doctest::Approx(10.0));
    for (std::size_t i = 1; i < g->n; ++i) CHECK(g->r[i] > g->r[i - 1]);
    std::vector<double> one(g->n, 1.0);
    CHECK(integrate(*g, one) == doctest::Approx(1000.0 / 3.0).epsilon(1e-8));
    CHECK(g->s_of(g->r[100]) == doctest::Approx(g->s[100]));
  }
}

TEST_CASE("gaussian closed forms") {
  for (double w : {0.7, 1.0, 2.0}) {
    CAPTURE(w);
    auto g = make_grid(4096, 14.0 * w);
    auto u = RadialFunction::sample(g, [w](double r) { return std::exp(-r * r / (w * w)); });
    const oracle::Gaussian gs{w};
    const auto e = energy_breakdown(u, {1, 1, 4, 1});
    CHECK(e.D == doctest::Approx(gs.D()).epsilon(1e-8));
    CHECK(e.A == doctest::Approx(gs.A()).epsilon(1e-6));
    CHECK(e.B == doctest::Approx(gs.B()).epsilon(1e-6));
    CHECK(e.C == doctest::Approx(gs.C(4.0)).epsilon(1e-8));
    CHECK(lp_power(u, 5.0) == doctest::Approx(gs.C(5.0)).epsilon(1e-8));
    CHECK(value_at_origin(u) == doctest::Approx(1.0).epsilon(1e-6));
  }
}

TEST_CASE("derivative and laplacian of a gaussian") {
  auto g = make_grid(4096, 12.0);
  auto u = RadialFunction::sample(g, [](double r) { return std::exp(-r * r); });
  const auto du = radial_derivative(u);
  const auto lap = radial_laplacian(u);
  double e1 = 0, e2 = 0;
  for (std::size_t i = 0; i < g->n; ++i) {
    const double r = g->r[i], ex = std::exp(-r * r);
    e1 = std::max(e1, std::abs(du[i] + 2 * r * ex));
    e2 = std::max(e2, std::abs(lap[i] - (4 * r * r - 6) * ex));
  }
  CHECK(e1 < 1e-6);
  CHECK(e2 < 1e-4);
}

TEST_CASE("uniform ball potential") {
  // rho = 1 on r < 1 has phi(0) = 2 pi, phi(1) = 4 pi / 3, phi(2) = 2 pi / 3.
  auto g = make_grid(4096, 4.0);  // r = 1 is the node i = n/2
  std::vector<double> rho(g->n);
  for (std::size_t i = 0; i < g->n; ++i) rho[i] = g->r[i] <= 1.0 ? 1.0 : 0.0;
  const auto phi = newton_potential(*g, rho);
  auto at = [&](double r) {
    std::size_t i = 0;
    while (g->r[i] < r - 1e-12) ++i;
    return phi[i];
  };
  CHECK(phi[0] == doctest::Approx(2 * pi).epsilon(2e-3));
  CHECK(at(1.0) == doctest::Approx(4 * pi / 3).epsilon(2e-3));
  CHECK(at(2.0) == doctest::Approx(2 * pi / 3).epsilon(2e-3));
}

TEST_CASE("poisson potential matches the shell double sum") {
  auto g = make_grid(128, 12.0);
  for (std::uint64_t s = 1; s <= 5; ++s) {
    const auto u = random_profile(g, 1.0, s);
    const auto phi = poisson_potential(u);
    const auto ref = oracle::potential_double_sum(u);
    for (std::size_t i = 0; i < g->n; i += 9) CHECK(phi[i] == doctest::Approx(ref[i]).epsilon(2e-3));
    CHECK(energy_breakdown(u, {1, 1, 4, 1}).B ==
          doctest::Approx(oracle::hartree_double_sum(u)).epsilon(1e-3));
  }
}

TEST_CASE("fiber rescaling obeys the scaling laws") {
  auto g = make_grid(4096, 40.0);
  auto u = RadialFunction::sample(g, [](double r) { return std::exp(-r * r / 2.0); });
  const ProblemParams prm{1, 1, 5, 1};
  const auto e = energy_breakdown(u, prm);
  for (double t : {0.5, 2.0}) {
    const auto ut = rescale_fiber(u, t);
    const auto et = energy_breakdown(ut, prm);
    CHECK(et.D == doctest::Approx(e.D).epsilon(1e-7));
    CHECK(et.A == doctest::Approx(t * t * e.A).epsilon(1e-6));
    CHECK(et.B == doctest::Approx(t * e.B).epsilon(1e-6));
    CHECK(et.C == doctest::Approx(std::pow(t, prm.sigma()) * e.C).epsilon(1e-6));
  }
  CHECK_THROWS_AS(rescale_fiber(u, 0.0), std::invalid_argument);
}

TEST_CASE("interpolation and cross-grid dilation") {
  auto g = make_grid(2048, 10.0);
  auto u = RadialFunction::sample(g, [](double r) { return std::exp(-r * r); });
  const Interpolant f(u);
  for (double r : {0.0, 0.013, 0.5, 1.7, 3.0}) CHECK(f(r) == doctest::Approx(std::exp(-r * r)).epsilon(1e-6));
  CHECK(f(11.0) == 0.0);
  auto h = make_grid(3000, 20.0, Spacing::uniform);
  const auto v = dilate(u, h, 2.0, 3.0);
  CHECK(v.grid().n == 3000);
  CHECK(v[100] == doctest::Approx(3.0 * std::exp(-4 * h->r[100] * h->r[100])).epsilon(1e-6));
}

TEST_CASE("mass caching follows mutation") {
  auto g = make_grid(512, 10.0);
  auto u = RadialFunction::sample(g, [](double r) { return std::exp(-r * r); });
  const double m = u.mass();
  u.mutable_values()[0] *= 2.0;
  CHECK(u.mass() != m);
  u.normalize_mass(2.5);
  CHECK(u.mass() == doctest::Approx(2.5));
}
