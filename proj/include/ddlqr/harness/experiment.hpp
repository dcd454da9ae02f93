#pragma once

// The benchmark plant and its seeded data-collection protocol.

#include <cstdint>

#include "ddlqr/datamodel.hpp"
#include "ddlqr/synthesis.hpp"

namespace ddlqr::harness {

/// How the exploration offset enters X0.
///  columns: every column gets offset_scale * v (the default reading).
///  scalar:  every entry gets offset_scale * sum(v), the literal scalar reading.
enum class OffsetMode { columns, scalar };

struct PaperExperimentConfig {
  Matrix A;
  Matrix B;
  SymMatrix Q;
  SymMatrix R;
  double noise_std = 0.1;
  Eigen::Index ell = 30;
  Vector v;
  double offset_scale = 10.0;
  OffsetMode offset_mode = OffsetMode::columns;
  Matrix K_expl;
  double x_rnd_std = 1.0;
  double u_rnd_std = 1.0;
  std::uint64_t seed = 42;

  /// A = [[0.525, -0.325], [-0.325, 0.525]], B = [1; 0], Q = I, R = 0.1,
  /// v = (-1, 1), K_expl = (-2.8, 6.8).
  static PaperExperimentConfig paper();

  PlantModel plant() const { return PlantModel{A, B, Q, R}; }

  /// Throws std::invalid_argument on negative stds or ell < n + m, and
  /// DimensionMismatch on inconsistent shapes.
  void validate() const;
};

/// X0 = offset + x_rnd_std * Xi, U0 = K_expl X0 + u_rnd_std * Upsilon,
/// X1 = A X0 + B U0 + noise_std * Omega, with Xi, Upsilon, Omega standard
/// normal matrices drawn from disjoint Philox streams (entry (r, c) of an
/// h-row matrix is draw c*h + r).
Dataset gen_paper_data(const PaperExperimentConfig& cfg);

}  // namespace ddlqr::harness
