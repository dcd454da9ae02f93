#pragma once

// Data-parallel inner loops used by the interior-point solver.
//
// Every kernel has a scalar reference implementation; SIMD variants (AVX2+FMA
// on x86-64, NEON on AArch64) are compiled into separate translation units and
// selected once at runtime from the host CPU features. SIMD variants reorder
// floating-point sums, so they agree with the scalar reference to rounding,
// not bit-for-bit. On a given machine the selected variant never changes, so
// results stay reproducible run to run.

#include <cstddef>
#include <cstdint>
#include <span>
#include <string_view>
#include <vector>

namespace ddlqr::kernels {

enum class Isa { scalar, avx2, neon };

std::string_view to_string(Isa isa);

/// Function table for one instruction-set variant.
struct KernelTable {
  Isa isa;
  // sum_i a[i] * b[i]
  double (*dot)(const double* a, const double* b, std::size_t n);
  // y[i] += alpha * x[i]
  void (*axpy)(double alpha, const double* x, double* y, std::size_t n);
  // sum_i w[i] * base[idx[i]]
  double (*gather_dot)(const double* w, const std::int32_t* idx, const double* base, std::size_t n);
};

/// Variants compiled in and supported by the running CPU; scalar is always first.
std::vector<Isa> available_isas();

/// Table for a specific variant. Throws std::invalid_argument if unavailable.
const KernelTable& table(Isa isa);

/// The variant chosen for this process (widest available).
const KernelTable& active();

inline double dot(std::span<const double> a, std::span<const double> b) {
  return active().dot(a.data(), b.data(), a.size());
}

inline void axpy(double alpha, std::span<const double> x, std::span<double> y) {
  active().axpy(alpha, x.data(), y.data(), x.size());
}

inline double gather_dot(std::span<const double> w, std::span<const std::int32_t> idx, const double* base) {
  return active().gather_dot(w.data(), idx.data(), base, w.size());
}

namespace detail {
// Implemented per variant. Unavailable variants return nullptr.
const KernelTable* scalar_table();
const KernelTable* avx2_table();
const KernelTable* neon_table();
}  // namespace detail

}  // namespace ddlqr::kernels
