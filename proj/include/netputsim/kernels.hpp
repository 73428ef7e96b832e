#pragma once

// Data-parallel inner loops shared by the estimator, simulator and
// validator. Every kernel has a scalar reference implementation and, on
// x86-64, an AVX2/FMA variant chosen at runtime. Both variants use a fixed
// reduction order, so results are reproducible for a given ISA.

#include <cstddef>
#include <span>
#include <string_view>

namespace netputsim::kernels {

enum class Isa { kScalar, kAvx2 };

std::string_view to_string(Isa isa);

// Raw-pointer kernel signatures. Matrices are dense row-major.
struct KernelTable {
  Isa isa;
  double (*dot)(const double* x, const double* y, std::size_t n);
  double (*sum_sq_diff)(const double* x, const double* y, std::size_t n);
  void (*axpy)(double a, const double* x, double* y, std::size_t n);
  // Y (T x G) = X (T x K) * B^T, with B stored G x K.
  void (*affine_rows)(const double* b, std::size_t g, std::size_t k,
                      const double* x, std::size_t t, double* y);
  // S (G x G) = E^T diag(w) E for E (T x G); w may be null (unit weights).
  void (*weighted_cross)(const double* e, const double* w, std::size_t t,
                         std::size_t g, double* s);
};

// True when the running CPU supports the variant and it was compiled in.
bool supported(Isa isa);
const KernelTable& table(Isa isa);

// Table selected at first use: AVX2 when supported, unless the
// NETPUTSIM_SIMD environment variable is set to "scalar".
const KernelTable& active();
void force(Isa isa);  // testing and --no-simd

inline double dot(std::span<const double> x, std::span<const double> y) {
  return active().dot(x.data(), y.data(), x.size());
}

inline double sum_sq_diff(std::span<const double> x, std::span<const double> y) {
  return active().sum_sq_diff(x.data(), y.data(), x.size());
}

inline void axpy(double a, std::span<const double> x, std::span<double> y) {
  active().axpy(a, x.data(), y.data(), x.size());
}

inline double sum(std::span<const double> x) {
  double total = 0.0;
  for (double v : x) total += v;
  return total;
}

}  // namespace netputsim::kernels
