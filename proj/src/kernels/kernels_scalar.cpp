#include "kernels_internal.hpp"

namespace netputsim::kernels::scalar {

double dot(const double* x, const double* y, std::size_t n) {
  double acc = 0.0;
  for (std::size_t i = 0; i < n; ++i) acc += x[i] * y[i];
  return acc;
}

double sum_sq_diff(const double* x, const double* y, std::size_t n) {
  double acc = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double d = x[i] - y[i];
    acc += d * d;
  }
  return acc;
}

void axpy(double a, const double* x, double* y, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) y[i] += a * x[i];
}

void affine_rows(const double* b, std::size_t g, std::size_t k, const double* x,
                 std::size_t t, double* y) {
  for (std::size_t r = 0; r < t; ++r) {
    const double* xr = x + r * k;
    for (std::size_t e = 0; e < g; ++e) {
      y[r * g + e] = dot(b + e * k, xr, k);
    }
  }
}

void weighted_cross(const double* e, const double* w, std::size_t t, std::size_t g,
                    double* s) {
  for (std::size_t i = 0; i < g * g; ++i) s[i] = 0.0;
  for (std::size_t r = 0; r < t; ++r) {
    const double* er = e + r * g;
    const double wr = w ? w[r] : 1.0;
    for (std::size_t i = 0; i < g; ++i) {
      const double wi = wr * er[i];
      for (std::size_t j = i; j < g; ++j) s[i * g + j] += wi * er[j];
    }
  }
  for (std::size_t i = 0; i < g; ++i) {
    for (std::size_t j = 0; j < i; ++j) s[i * g + j] = s[j * g + i];
  }
}

}  // namespace netputsim::kernels::scalar
