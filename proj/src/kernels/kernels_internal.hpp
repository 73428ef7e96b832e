#pragma once

// Declarations shared between the dispatch unit and the per-ISA units.
// Keep this header free of templates so nothing compiled with -mavx2 can
// be merged into the scalar translation units.

#include <cstddef>

namespace netputsim::kernels::scalar {
double dot(const double* x, const double* y, std::size_t n);
double sum_sq_diff(const double* x, const double* y, std::size_t n);
void axpy(double a, const double* x, double* y, std::size_t n);
void affine_rows(const double* b, std::size_t g, std::size_t k, const double* x,
                 std::size_t t, double* y);
void weighted_cross(const double* e, const double* w, std::size_t t, std::size_t g,
                    double* s);
}  // namespace netputsim::kernels::scalar

namespace netputsim::kernels::avx2 {
double dot(const double* x, const double* y, std::size_t n);
double sum_sq_diff(const double* x, const double* y, std::size_t n);
void axpy(double a, const double* x, double* y, std::size_t n);
void affine_rows(const double* b, std::size_t g, std::size_t k, const double* x,
                 std::size_t t, double* y);
void weighted_cross(const double* e, const double* w, std::size_t t, std::size_t g,
                    double* s);
}  // namespace netputsim::kernels::avx2
