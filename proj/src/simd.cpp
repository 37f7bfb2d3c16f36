#include "sps/simd.hpp"

#include <atomic>
#include <cstdlib>
#include <cstring>

namespace sps::simd {

namespace scalar {

// Four interleaved accumulators keep the reduction order close to the AVX2
// lane layout, which tightens the scalar/vector agreement.
double wsum(const double* w, const double* x, std::size_t n) {
  double acc[4] = {0.0, 0.0, 0.0, 0.0};
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4)
    for (int k = 0; k < 4; ++k) acc[k] += w[i + k] * x[i + k];
  double s = (acc[0] + acc[2]) + (acc[1] + acc[3]);
  for (; i < n; ++i) s += w[i] * x[i];
  return s;
}

double wdot(const double* w, const double* x, const double* y, std::size_t n) {
  double acc[4] = {0.0, 0.0, 0.0, 0.0};
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4)
    for (int k = 0; k < 4; ++k) acc[k] += w[i + k] * x[i + k] * y[i + k];
  double s = (acc[0] + acc[2]) + (acc[1] + acc[3]);
  for (; i < n; ++i) s += w[i] * x[i] * y[i];
  return s;
}

double wdot3(const double* w, const double* x, const double* y, const double* z, std::size_t n) {
  double acc[4] = {0.0, 0.0, 0.0, 0.0};
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4)
    for (int k = 0; k < 4; ++k) acc[k] += w[i + k] * x[i + k] * y[i + k] * z[i + k];
  double s = (acc[0] + acc[2]) + (acc[1] + acc[3]);
  for (; i < n; ++i) s += w[i] * x[i] * y[i] * z[i];
  return s;
}

void axpy(double a, const double* x, double* y, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) y[i] += a * x[i];
}

}  // namespace scalar

namespace {

constexpr Kernels kScalar{scalar::wsum, scalar::wdot, scalar::wdot3, scalar::axpy};
constexpr Kernels kAvx2{avx2::wsum, avx2::wdot, avx2::wdot3, avx2::axpy};

Isa detect() {
  if (const char* env = std::getenv("SPS_ISA"); env && std::strcmp(env, "scalar") == 0)
    return Isa::scalar;
  return cpu_has_avx2() ? Isa::avx2 : Isa::scalar;
}

std::atomic<int>& selected() {
  static std::atomic<int> isa{static_cast<int>(detect())};
  return isa;
}

}  // namespace

bool cpu_has_avx2() {
#if defined(__x86_64__) || defined(__i386__)
  static const bool has = __builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma");
  return has;
#else
  return false;
#endif
}

const Kernels& kernels(Isa isa) {
  if (isa == Isa::avx2 && cpu_has_avx2()) return kAvx2;
  return kScalar;
}

const Kernels& active() { return kernels(active_isa()); }

Isa active_isa() { return static_cast<Isa>(selected().load(std::memory_order_relaxed)); }

void force_isa(Isa isa) {
  if (isa == Isa::avx2 && !cpu_has_avx2()) isa = Isa::scalar;
  selected().store(static_cast<int>(isa), std::memory_order_relaxed);
}

std::string_view isa_name(Isa isa) { return isa == Isa::avx2 ? "avx2" : "scalar"; }

}  // namespace sps::simd
