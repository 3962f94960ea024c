#pragma once

#include <cstddef>

// Small dense kernels used in the inner products and the optimizer loop.
// A scalar reference implementation always exists; on x86-64 an AVX2+FMA
// path (on aarch64 a NEON path) is selected once at startup when the CPU
// supports it. force_scalar() pins the reference path for equivalence tests.
namespace equidesign::kernels {

double dot(const double* a, const double* b, std::size_t n);
// sum_k w[k]*a[k]*b[k]
double dot3(const double* w, const double* a, const double* b, std::size_t n);
// y += alpha * x
void axpy(double alpha, const double* x, double* y, std::size_t n);
// x[k] = clamp(x[k], lo, hi)
void clip(double lo, double hi, double* x, std::size_t n);

// "avx2", "neon" or "scalar"
const char* active_isa();
void force_scalar(bool on);

// Reference implementations, always available.
double dot_scalar(const double* a, const double* b, std::size_t n);
double dot3_scalar(const double* w, const double* a, const double* b, std::size_t n);
void axpy_scalar(double alpha, const double* x, double* y, std::size_t n);
void clip_scalar(double lo, double hi, double* x, std::size_t n);

}  // namespace equidesign::kernels
