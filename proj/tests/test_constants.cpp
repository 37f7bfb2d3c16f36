#include <doctest.h>

#include <cmath>
#include <cstdio>
#include <filesystem>

#include "oracles.hpp"
#include "sps/constants.hpp"
#include "sps/fiber.hpp"

using namespace sps;

namespace {

// sech(r)^{1/2}: the best member of the sech^beta family, within 1% of the
// p = 4 maximizer. Composite Simpson on [0, 400].
double sech_half_quotient() {
  const int m = 400000;
  const double h = 400.0 / m;
  double A = 0, C = 0, D = 0;
  for (int i = 0; i <= m; ++i) {
    const double r = i * h, wt = (i == 0 || i == m) ? 1 : (i % 2 ? 4 : 2);
    const double f = std::pow(std::cosh(r), -0.5), fp = -0.5 * f * std::tanh(r);
    A += wt * fp * fp * r * r;
    D += wt * f * f * r * r;
    C += wt * std::pow(f, 4) * r * r;
  }
  const double s = 4 * oracle::pi * h / 3;
  A *= s, C *= s, D *= s;
  return C / (std::pow(A, 1.5) * std::sqrt(D));
}

const ConstantsOptions kFast{2048, false, 60.0};

}  // namespace

TEST_CASE("hartree constant") {
  const auto r = sharp_kh({4096, true, 60.0});
  CHECK(r.value == doctest::Approx(0.6588256).epsilon(1e-5));
  CHECK(r.refinement_change < 1e-3);
  CHECK(r.value >= oracle::kh_gaussian_quotient());
  CHECK(hartree_quotient(r.maximizer) == doctest::Approx(r.value).epsilon(1e-3));
}

TEST_CASE("gagliardo-nirenberg constants against trial families") {
  const double k4 = sharp_kgn(4.0, kFast).value;
  CHECK(k4 >= sech_half_quotient());
  CHECK(k4 == doctest::Approx(sech_half_quotient()).epsilon(1e-2));
  CHECK(k4 >= oracle::gn_gaussian_quotient(4.0));
  CHECK(sharp_kgn(5.0, kFast).value >= oracle::gn_gaussian_quotient(5.0));
}

TEST_CASE("critical constant is the Sobolev constant") {
  const auto r = sharp_kgn(6.0, {4096, false, 60.0});
  CHECK(r.value == doctest::Approx(std::pow(oracle::sobolev_S(), -3.0)).epsilon(1e-3));
  CHECK(gn_quotient(r.maximizer, 6.0) == doctest::Approx(r.value).epsilon(1e-3));
}

TEST_CASE("random profiles never beat the sharp constants") {
  auto g = make_grid(2048, 25.0);
  const double kh = sharp_kh(kFast).value;
  for (double p : {4.0, 5.0, 6.0}) {
    const double k = sharp_kgn(p, kFast).value;
    for (std::uint64_t s = 1; s <= 50; ++s) {
      const auto u = random_profile(g, 1.0, s);
      CHECK(gn_quotient(u, p) <= k * (1 + 1e-9));
      if (p == 4.0) CHECK(hartree_quotient(u) <= kh * (1 + 1e-9));
    }
  }
}

TEST_CASE("quotients are invariant under the fiber and mass scalings") {
  auto g = make_grid(4096, 40.0);
  const auto u = random_profile(g, 1.0, 5);
  auto v = rescale_fiber(u, 1.8);
  v.scale(1.3);
  CHECK(gn_quotient(v, 5.0) == doctest::Approx(gn_quotient(u, 5.0)).epsilon(1e-6));
  CHECK(hartree_quotient(v) == doctest::Approx(hartree_quotient(u)).epsilon(1e-6));
}

TEST_CASE("threshold formulas") {
  const double kgn = 0.04, kh = 0.65;
  const auto t = thresholds({1, 1, 4, 1}, kgn, kh);
  const double M = 4.0 / (3 * 2 * kgn), N = 4.0 / (2 * kh);
  CHECK(t.M == doctest::Approx(M));
  CHECK(t.N == doctest::Approx(N));
  CHECK(t.c1 == doctest::Approx(std::pow(N, 0.5) * std::pow(M, 0.5)));
  CHECK(t.k0 == doctest::Approx(1 / (N * N)));
  CHECK(t.k1 == doctest::Approx(t.k0 * std::pow(t.c1, 3)));
  CHECK_FALSE(t.crit_level.has_value());
  const auto s = thresholds({1, 4, 6, 1}, 0.006, kh);
  REQUIRE(s.crit_level.has_value());
  CHECK(*s.crit_level == doctest::Approx(1 / (3 * std::sqrt(4 * 0.006))));
  const auto n = thresholds({1, -1, 5, 1}, kgn, kh);
  CHECK(std::isnan(n.c1));
  CHECK(std::isnan(n.M));
}

TEST_CASE("constant cache round trip") {
  const auto path = std::filesystem::temp_directory_path() / "sps_constants_cache_test.json";
  std::filesystem::remove(path);
  const auto a = compute_constants({1, 1, 4, 1}, path.string(), kFast);
  REQUIRE(std::filesystem::exists(path));
  const auto b = compute_constants({1, 1, 4, 1}, path.string(), kFast);
  CHECK(a.K_GN == b.K_GN);
  CHECK(a.K_H == b.K_H);
  CHECK(a.c1 == b.c1);
  std::filesystem::remove(path);
}
