#include <doctest.h>

#include <cmath>

#include "oracles.hpp"
#include "sps/errors.hpp"
#include "sps/fiber.hpp"

using namespace sps;

// gamma = a = 1, p = 4: with B = 4 and C = 4/3, g'(t) = t A - 1 - t^2,
// so the roots are (A -+ sqrt(A^2 - 4)) / 2 and t* = A / 2.
TEST_CASE("fiber roots of a known triple") {
  const ProblemParams prm{1, 1, 4, 1};
  const auto f = fiber_profile(3.0, 4.0, 4.0 / 3.0, prm);
  CHECK(f.t_star == doctest::Approx(1.5));
  CHECK(f.s_plus == doctest::Approx((3 - std::sqrt(5.0)) / 2).epsilon(1e-12));
  CHECK(f.s_minus == doctest::Approx((3 + std::sqrt(5.0)) / 2).epsilon(1e-12));
  CHECK(f.dg(f.s_plus) == doctest::Approx(0.0).scale(1.0).epsilon(1e-12));
  CHECK(f.d2g(f.s_plus) > 0);
  CHECK(f.d2g(f.s_minus) < 0);
  CHECK(f.Q_at(f.s_minus) == doctest::Approx(0.0).scale(1.0).epsilon(1e-12));
  CHECK_THROWS_AS(fiber_profile(2.0, 4.0, 4.0 / 3.0, prm), DegenerateFiber);
  CHECK_THROWS_AS(fiber_profile(1.0, 4.0, 4.0 / 3.0, prm), DegenerateFiber);
}

TEST_CASE("classification on the fiber roots") {
  const ProblemParams prm{1, 1, 4, 3};
  auto g = make_grid(4096, 30.0);
  const auto u = random_profile(g, prm.c, 11);
  const auto f = fiber_profile(u, prm);
  CHECK(fiber_profile(rescale_fiber(u, f.s_plus), prm).classification == FiberClass::LambdaPlus);
  CHECK(fiber_profile(rescale_fiber(u, f.s_minus), prm).classification == FiberClass::LambdaMinus);
  CHECK(fiber_profile(rescale_fiber(u, f.t_star), prm).classification == FiberClass::NotOnLambda);
}

TEST_CASE("I- agrees with a dense scan of the fiber") {
  const ProblemParams prm{1, 1, 4, 3.0};
  auto g = make_grid(4096, 30.0);
  for (std::uint64_t s = 1; s <= 20; ++s) {
    const auto u = random_profile(g, prm.c, 300 + s);
    const auto f = fiber_profile(u, prm);
    const double scan = oracle::dense_fiber_max(f.A, f.B, f.C, prm, f.t_star, 100 * f.t_star);
    CHECK(reduced_I(f, FiberBranch::minus) == doctest::Approx(scan).epsilon(1e-6));
    CHECK(reduced_I(f, FiberBranch::plus) <= reduced_I(f, FiberBranch::minus));
  }
}

TEST_CASE("repulsive and defocusing fiber is monotone") {
  const auto rep = lambda_zero_probe({-1, -1, 4, 1}, 100, make_grid(2048, 30.0), 1, 100);
  CHECK(rep.samples == 100);
  CHECK(rep.all_positive);
  CHECK(rep.min_ratio > 0);
}

TEST_CASE("scaled triples follow the fiber laws") {
  const ProblemParams prm{1, 1, 5, 1};
  const auto f = fiber_profile(2.0, 1.0, 0.5, prm);
  const double t = 1.7;
  CHECK(f.A_at(t) == doctest::Approx(t * t * 2.0));
  CHECK(f.B_at(t) == doctest::Approx(t));
  CHECK(f.C_at(t) == doctest::Approx(std::pow(t, 4.5) * 0.5));
  CHECK(f.g(t) == doctest::Approx(oracle::fiber_g(t, 2.0, 1.0, 0.5, prm)));
}
