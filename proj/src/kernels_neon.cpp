// NEON kernel variants for aarch64 (NEON is architecturally guaranteed there,
// so no runtime probe is needed).
#include <arm_neon.h>

#include <cstddef>

namespace equidesign::kernels {

double dot_neon(const double* a, const double* b, std::size_t n) {
  float64x2_t acc = vdupq_n_f64(0.0);
  std::size_t k = 0;
  for (; k + 2 <= n; k += 2) acc = vfmaq_f64(acc, vld1q_f64(a + k), vld1q_f64(b + k));
  double s = vaddvq_f64(acc);
  for (; k < n; ++k) s += a[k] * b[k];
  return s;
}

double dot3_neon(const double* w, const double* a, const double* b, std::size_t n) {
  float64x2_t acc = vdupq_n_f64(0.0);
  std::size_t k = 0;
  for (; k + 2 <= n; k += 2) {
    float64x2_t prod = vmulq_f64(vld1q_f64(a + k), vld1q_f64(b + k));
    acc = vfmaq_f64(acc, vld1q_f64(w + k), prod);
  }
  double s = vaddvq_f64(acc);
  for (; k < n; ++k) s += w[k] * a[k] * b[k];
  return s;
}

void axpy_neon(double alpha, const double* x, double* y, std::size_t n) {
  float64x2_t va = vdupq_n_f64(alpha);
  std::size_t k = 0;
  for (; k + 2 <= n; k += 2)
    vst1q_f64(y + k, vfmaq_f64(vld1q_f64(y + k), va, vld1q_f64(x + k)));
  for (; k < n; ++k) y[k] += alpha * x[k];
}

void clip_neon(double lo, double hi, double* x, std::size_t n) {
  float64x2_t vlo = vdupq_n_f64(lo);
  float64x2_t vhi = vdupq_n_f64(hi);
  std::size_t k = 0;
  for (; k + 2 <= n; k += 2)
    vst1q_f64(x + k, vminq_f64(vhi, vmaxq_f64(vlo, vld1q_f64(x + k))));
  for (; k < n; ++k) x[k] = x[k] < lo ? lo : (x[k] > hi ? hi : x[k]);
}

}  // namespace equidesign::kernels
