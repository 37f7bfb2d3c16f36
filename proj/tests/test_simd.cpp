#include <doctest.h>

#include <cmath>
#include <random>
#include <vector>

#include "sps/functionals.hpp"
#include "sps/simd.hpp"

using namespace sps;

namespace {

std::vector<double> randoms(std::size_t n, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> d(-1.0, 1.0);
  std::vector<double> v(n);
  for (auto& x : v) x = d(rng);
  return v;
}

// Restores the process-wide ISA on scope exit.
struct IsaGuard {
  simd::Isa saved = simd::active_isa();
  ~IsaGuard() { simd::force_isa(saved); }
};

}  // namespace

TEST_CASE("avx2 kernels match the scalar reference") {
  if (!simd::cpu_has_avx2()) {
    MESSAGE("cpu lacks avx2; equivalence not exercised");
    return;
  }
  const auto& s = simd::kernels(simd::Isa::scalar);
  const auto& v = simd::kernels(simd::Isa::avx2);
  for (std::size_t n : {0, 1, 3, 4, 5, 7, 8, 15, 16, 17, 37, 1000, 10001}) {
    CAPTURE(n);
    const auto w = randoms(n, 1), x = randoms(n, 2), y = randoms(n, 3), z = randoms(n, 4);
    double scale = 1.0;
    for (std::size_t i = 0; i < n; ++i) scale += std::abs(w[i] * x[i]);
    CHECK(std::abs(v.wsum(w.data(), x.data(), n) - s.wsum(w.data(), x.data(), n)) <= 1e-14 * scale);
    CHECK(std::abs(v.wdot(w.data(), x.data(), y.data(), n) - s.wdot(w.data(), x.data(), y.data(), n)) <= 1e-14 * scale);
    CHECK(std::abs(v.wdot3(w.data(), x.data(), y.data(), z.data(), n) -
                   s.wdot3(w.data(), x.data(), y.data(), z.data(), n)) <= 1e-14 * scale);
    auto ys = y, yv = y;
    s.axpy(0.37, x.data(), ys.data(), n);
    v.axpy(0.37, x.data(), yv.data(), n);
    for (std::size_t i = 0; i < n; ++i) CHECK(std::abs(ys[i] - yv[i]) <= 1e-15);
  }
}

TEST_CASE("energies agree across ISAs") {
  IsaGuard guard;
  auto g = make_grid(2048, 20.0);
  auto u = RadialFunction::sample(g, [](double r) { return std::exp(-r * r / 3.0) * (1 + 0.2 * r); });
  const ProblemParams prm{1, 1, 4, 1};
  simd::force_isa(simd::Isa::scalar);
  const auto es = energy_breakdown(u, prm);
  simd::force_isa(simd::Isa::avx2);
  const auto ev = energy_breakdown(u, prm);
  CHECK(ev.A == doctest::Approx(es.A).epsilon(1e-12));
  CHECK(ev.B == doctest::Approx(es.B).epsilon(1e-12));
  CHECK(ev.C == doctest::Approx(es.C).epsilon(1e-12));
  CHECK(ev.F == doctest::Approx(es.F).epsilon(1e-12));
}

TEST_CASE("forcing an ISA is reflected by active()") {
  IsaGuard guard;
  simd::force_isa(simd::Isa::scalar);
  CHECK(simd::active_isa() == simd::Isa::scalar);
  CHECK(simd::isa_name(simd::Isa::scalar) == "scalar");
  simd::force_isa(simd::Isa::avx2);
  CHECK(simd::active_isa() == (simd::cpu_has_avx2() ? simd::Isa::avx2 : simd::Isa::scalar));
}
