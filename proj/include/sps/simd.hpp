#pragma once

#include <cstddef>
#include <string_view>

// Weighted reductions used by every quadrature. Each kernel has a scalar
// reference and an AVX2 variant; the variant is chosen once at runtime.
namespace sps::simd {

enum class Isa { scalar, avx2 };

struct Kernels {
  double (*wsum)(const double* w, const double* x, std::size_t n);
  double (*wdot)(const double* w, const double* x, const double* y, std::size_t n);
  double (*wdot3)(const double* w, const double* x, const double* y, const double* z,
                  std::size_t n);
  void (*axpy)(double a, const double* x, double* y, std::size_t n);
};

/// Kernels for a specific ISA. Requesting avx2 on a CPU without it returns scalar.
const Kernels& kernels(Isa isa);

/// Kernels for the ISA currently selected (best available unless overridden).
const Kernels& active();
Isa active_isa();
bool cpu_has_avx2();

/// Forces an ISA for the whole process; used by equivalence tests and `SPS_ISA=scalar`.
void force_isa(Isa isa);
std::string_view isa_name(Isa isa);

namespace scalar {
double wsum(const double* w, const double* x, std::size_t n);
double wdot(const double* w, const double* x, const double* y, std::size_t n);
double wdot3(const double* w, const double* x, const double* y, const double* z, std::size_t n);
void axpy(double a, const double* x, double* y, std::size_t n);
}  // namespace scalar

namespace avx2 {
double wsum(const double* w, const double* x, std::size_t n);
double wdot(const double* w, const double* x, const double* y, std::size_t n);
double wdot3(const double* w, const double* x, const double* y, const double* z, std::size_t n);
void axpy(double a, const double* x, double* y, std::size_t n);
}  // namespace avx2

}  // namespace sps::simd
