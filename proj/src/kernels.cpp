#include "equidesign/kernels.hpp"

#include <algorithm>
#include <atomic>

namespace equidesign::kernels {

double dot_scalar(const double* a, const double* b, std::size_t n) {
  double acc = 0.0;
  for (std::size_t k = 0; k < n; ++k) acc += a[k] * b[k];
  return acc;
}

double dot3_scalar(const double* w, const double* a, const double* b, std::size_t n) {
  double acc = 0.0;
  for (std::size_t k = 0; k < n; ++k) acc += w[k] * a[k] * b[k];
  return acc;
}

void axpy_scalar(double alpha, const double* x, double* y, std::size_t n) {
  for (std::size_t k = 0; k < n; ++k) y[k] += alpha * x[k];
}

void clip_scalar(double lo, double hi, double* x, std::size_t n) {
  for (std::size_t k = 0; k < n; ++k) x[k] = std::clamp(x[k], lo, hi);
}

#if defined(EQUIDESIGN_HAVE_AVX2)
bool cpu_has_avx2();
double dot_avx2(const double* a, const double* b, std::size_t n);
double dot3_avx2(const double* w, const double* a, const double* b, std::size_t n);
void axpy_avx2(double alpha, const double* x, double* y, std::size_t n);
void clip_avx2(double lo, double hi, double* x, std::size_t n);
#endif
#if defined(EQUIDESIGN_HAVE_NEON)
double dot_neon(const double* a, const double* b, std::size_t n);
double dot3_neon(const double* w, const double* a, const double* b, std::size_t n);
void axpy_neon(double alpha, const double* x, double* y, std::size_t n);
void clip_neon(double lo, double hi, double* x, std::size_t n);
#endif

namespace {

struct Dispatch {
  double (*dot)(const double*, const double*, std::size_t) = dot_scalar;
  double (*dot3)(const double*, const double*, const double*, std::size_t) = dot3_scalar;
  void (*axpy)(double, const double*, double*, std::size_t) = axpy_scalar;
  void (*clip)(double, double, double*, std::size_t) = clip_scalar;
  const char* isa = "scalar";
};

Dispatch pick_simd() {
  Dispatch d;
#if defined(EQUIDESIGN_HAVE_AVX2)
  if (cpu_has_avx2()) {
    d.dot = dot_avx2;
    d.dot3 = dot3_avx2;
    d.axpy = axpy_avx2;
    d.clip = clip_avx2;
    d.isa = "avx2";
  }
#elif defined(EQUIDESIGN_HAVE_NEON)
  d.dot = dot_neon;
  d.dot3 = dot3_neon;
  d.axpy = axpy_neon;
  d.clip = clip_neon;
  d.isa = "neon";
#endif
  return d;
}

const Dispatch g_simd = pick_simd();
const Dispatch g_scalar{};
std::atomic<bool> g_force_scalar{false};

inline const Dispatch& active() { return g_force_scalar.load() ? g_scalar : g_simd; }

}  // namespace

double dot(const double* a, const double* b, std::size_t n) { return active().dot(a, b, n); }

double dot3(const double* w, const double* a, const double* b, std::size_t n) {
  return active().dot3(w, a, b, n);
}

void axpy(double alpha, const double* x, double* y, std::size_t n) {
  active().axpy(alpha, x, y, n);
}

void clip(double lo, double hi, double* x, std::size_t n) { active().clip(lo, hi, x, n); }

const char* active_isa() { return active().isa; }

void force_scalar(bool on) { g_force_scalar.store(on); }

}  // namespace equidesign::kernels
