#pragma once

// Seeded random objects shared by the test suites.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <random>

#include "ddlqr/harness/experiment.hpp"
#include "ddlqr/matlin.hpp"

namespace ddlqr::test {

class Rng {
 public:
  explicit Rng(std::uint64_t seed) : gen_(seed) {}

  double normal() { return normal_(gen_); }
  double uniform(double lo, double hi) { return std::uniform_real_distribution<double>(lo, hi)(gen_); }
  int integer(int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(gen_); }

  Matrix matrix(Eigen::Index r, Eigen::Index c) {
    Matrix m(r, c);
    for (Eigen::Index j = 0; j < c; ++j)
      for (Eigen::Index i = 0; i < r; ++i) m(i, j) = normal();
    return m;
  }

  /// R R' + I
  SymMatrix spd(Eigen::Index n) {
    const Matrix r = matrix(n, n);
    return SymMatrix(Matrix(r * r.transpose() + Matrix::Identity(n, n)));
  }

  /// Eigenvalues uniform in [lo, hi] with a random orthogonal basis.
  SymMatrix spd_spectrum(Eigen::Index n, double lo, double hi) {
    const Matrix q = Eigen::HouseholderQR<Matrix>(matrix(n, n)).householderQ();
    Vector d(n);
    for (Eigen::Index i = 0; i < n; ++i) d(i) = uniform(lo, hi);
    return SymMatrix(Matrix(q * d.asDiagonal() * q.transpose()));
  }

  /// Random r x c matrix of the given rank.
  Matrix low_rank(Eigen::Index r, Eigen::Index c, Eigen::Index rank) { return matrix(r, rank) * matrix(rank, c); }

 private:
  std::mt19937_64 gen_;
  std::normal_distribution<double> normal_;
};

inline harness::PaperExperimentConfig plant_cfg(std::uint64_t seed = 42, Eigen::Index ell = 30) {
  auto cfg = harness::PaperExperimentConfig::paper();
  cfg.seed = seed;
  cfg.ell = ell;
  return cfg;
}

inline harness::PaperExperimentConfig noiseless_cfg(std::uint64_t seed = 42) {
  auto cfg = plant_cfg(seed);
  cfg.noise_std = 0.0;
  return cfg;
}

inline double rel_diff(double a, double b) { return std::abs(a - b) / std::max({1.0, std::abs(a), std::abs(b)}); }

inline double fro_rel(const Matrix& a, const Matrix& b) { return (a - b).norm() / std::max(1.0, b.norm()); }

}  // namespace ddlqr::test
