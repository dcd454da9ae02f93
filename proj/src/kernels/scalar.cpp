#include "ddlqr/kernels.hpp"

namespace ddlqr::kernels {
namespace {

double dot_scalar(const double* a, const double* b, std::size_t n) {
  double sum = 0.0;
  for (std::size_t i = 0; i < n; ++i) sum += a[i] * b[i];
  return sum;
}

void axpy_scalar(double alpha, const double* x, double* y, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) y[i] += alpha * x[i];
}

double gather_dot_scalar(const double* w, const std::int32_t* idx, const double* base, std::size_t n) {
  double sum = 0.0;
  for (std::size_t i = 0; i < n; ++i) sum += w[i] * base[idx[i]];
  return sum;
}

constexpr KernelTable kScalar{Isa::scalar, dot_scalar, axpy_scalar, gather_dot_scalar};

}  // namespace

const KernelTable* detail::scalar_table() { return &kScalar; }

}  // namespace ddlqr::kernels
