#include "ddlqr/harness/experiment.hpp"

#include <stdexcept>

#include "ddlqr/errors.hpp"
#include "ddlqr/harness/rng.hpp"

namespace ddlqr::harness {

PaperExperimentConfig PaperExperimentConfig::paper() {
  PaperExperimentConfig cfg;
  cfg.A.resize(2, 2);
  cfg.A << 0.525, -0.325, -0.325, 0.525;
  cfg.B.resize(2, 1);
  cfg.B << 1.0, 0.0;
  cfg.Q = SymMatrix::identity(2);
  cfg.R = SymMatrix(Matrix::Constant(1, 1, 0.1));
  cfg.v.resize(2);
  cfg.v << -1.0, 1.0;
  cfg.K_expl.resize(1, 2);
  cfg.K_expl << -2.8, 6.8;
  return cfg;
}

void PaperExperimentConfig::validate() const {
  plant().validate();
  const Eigen::Index n = A.rows(), m = B.cols();
  if (v.size() != n || K_expl.rows() != m || K_expl.cols() != n) {
    throw DimensionMismatch("PaperExperimentConfig: v must have n entries and K_expl be m x n");
  }
  if (!(noise_std >= 0.0 && x_rnd_std >= 0.0 && u_rnd_std >= 0.0)) {
    throw std::invalid_argument("PaperExperimentConfig: standard deviations must be non-negative");
  }
  if (ell < n + m) throw std::invalid_argument("PaperExperimentConfig: ell must be at least n + m");
}

namespace {

Matrix normal_matrix(std::uint64_t seed, std::uint32_t stream, Eigen::Index rows, Eigen::Index cols, double std) {
  Matrix out(rows, cols);
  for (Eigen::Index c = 0; c < cols; ++c) {
    for (Eigen::Index r = 0; r < rows; ++r) {
      out(r, c) = std == 0.0 ? 0.0 : std * standard_normal(seed, stream, static_cast<std::uint64_t>(c * rows + r));
    }
  }
  return out;
}

}  // namespace

Dataset gen_paper_data(const PaperExperimentConfig& cfg) {
  cfg.validate();
  const Eigen::Index n = cfg.A.rows(), m = cfg.B.cols(), ell = cfg.ell;
  Matrix x0 = normal_matrix(cfg.seed, kStreamX, n, ell, cfg.x_rnd_std);
  if (cfg.offset_mode == OffsetMode::columns) {
    x0.colwise() += cfg.offset_scale * cfg.v;
  } else {
    x0.array() += cfg.offset_scale * cfg.v.sum();
  }
  Matrix u0 = cfg.K_expl * x0 + normal_matrix(cfg.seed, kStreamU, m, ell, cfg.u_rnd_std);
  Matrix x1 = cfg.A * x0 + cfg.B * u0 + normal_matrix(cfg.seed, kStreamW, n, ell, cfg.noise_std);
  return Dataset(std::move(x0), std::move(u0), std::move(x1));
}

}  // namespace ddlqr::harness
