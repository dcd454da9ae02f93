#include "ddlqr/kernels.hpp"

#if defined(__aarch64__) && defined(__ARM_NEON)
#include <arm_neon.h>

namespace ddlqr::kernels {
namespace {

double dot_neon(const double* a, const double* b, std::size_t n) {
  float64x2_t acc0 = vdupq_n_f64(0.0);
  float64x2_t acc1 = vdupq_n_f64(0.0);
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    acc0 = vfmaq_f64(acc0, vld1q_f64(a + i), vld1q_f64(b + i));
    acc1 = vfmaq_f64(acc1, vld1q_f64(a + i + 2), vld1q_f64(b + i + 2));
  }
  double sum = vaddvq_f64(vaddq_f64(acc0, acc1));
  for (; i < n; ++i) sum += a[i] * b[i];
  return sum;
}

void axpy_neon(double alpha, const double* x, double* y, std::size_t n) {
  const float64x2_t va = vdupq_n_f64(alpha);
  std::size_t i = 0;
  for (; i + 2 <= n; i += 2) vst1q_f64(y + i, vfmaq_f64(vld1q_f64(y + i), va, vld1q_f64(x + i)));
  for (; i < n; ++i) y[i] += alpha * x[i];
}

// NEON has no gather; pair up loads so the FMA stays vectorized.
double gather_dot_neon(const double* w, const std::int32_t* idx, const double* base, std::size_t n) {
  float64x2_t acc = vdupq_n_f64(0.0);
  std::size_t i = 0;
  for (; i + 2 <= n; i += 2) {
    const double pair[2] = {base[idx[i]], base[idx[i + 1]]};
    acc = vfmaq_f64(acc, vld1q_f64(w + i), vld1q_f64(pair));
  }
  double sum = vaddvq_f64(acc);
  for (; i < n; ++i) sum += w[i] * base[idx[i]];
  return sum;
}

constexpr KernelTable kNeon{Isa::neon, dot_neon, axpy_neon, gather_dot_neon};

}  // namespace

const KernelTable* detail::neon_table() { return &kNeon; }

}  // namespace ddlqr::kernels

#else

namespace ddlqr::kernels {
const KernelTable* detail::neon_table() { return nullptr; }
}  // namespace ddlqr::kernels

#endif
