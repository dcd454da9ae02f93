#include "ddlqr/effects.hpp"

#include <stdexcept>

#include "ddlqr/errors.hpp"

namespace ddlqr {

std::string to_string(Parameterization p) { return p == Parameterization::gram ? "gram" : "covariance"; }

void RegWeights::validate() const {
  if (!(lambda1 >= 0.0 && lambda2 >= 0.0 && lambda3 >= 0.0)) {
    throw std::invalid_argument("regularization weights must be non-negative");
  }
  if (parameterization == Parameterization::covariance && lambda1 != 0.0) {
    throw std::invalid_argument("covariance parameterization has no closed-loop deviation term (lambda1 must be 0)");
  }
}

std::string RegWeights::case_label() const {
  std::string out = "{";
  const double weights[3] = {lambda1, lambda2, lambda3};
  bool first = true;
  for (int i = 0; i < 3; ++i) {
    if (weights[i] > 0.0) {
      if (!first) out += ',';
      out += std::to_string(i + 1);
      first = false;
    }
  }
  return out + "}";
}

namespace {

double weighted_sq(const SymMatrix& inv_sqrt, const Matrix& dev, const SymMatrix& p_sqrt) {
  return (inv_sqrt.mat() * dev * p_sqrt.mat()).squaredNorm();
}

// Term value, or nullopt when the covariance is singular.
std::optional<double> try_term(const SymMatrix& cov, const char* label, const Matrix& dev, const SymMatrix& p_sqrt,
                               bool required) {
  try {
    return weighted_sq(inv_sym_sqrt(cov, label), dev, p_sqrt);
  } catch (const NotPositiveDefinite&) {
    if (required) throw;
    return std::nullopt;
  }
}

}  // namespace

double eval_reg_gram(const Matrix& g, const SymMatrix& p, double lambda, bool projected, const DataStats& stats) {
  if (g.rows() != stats.ell || g.cols() != p.dim()) throw DimensionMismatch("eval_reg_gram: G must be ell x n");
  if (lambda == 0.0) return 0.0;
  const SymMatrix p_sqrt = sym_sqrt(p);
  const Matrix gp = g * p_sqrt.mat();
  if (projected) return lambda * (stats.proj_perp * gp).squaredNorm();
  return lambda * gp.squaredNorm();
}

double eval_reg_covar(const Matrix& k, const SymMatrix& p, double lambda, const DataStats& stats) {
  if (k.rows() != stats.m || k.cols() != stats.n || p.dim() != stats.n) {
    throw DimensionMismatch("eval_reg_covar: K must be m x n and P n x n");
  }
  if (lambda == 0.0) return 0.0;
  Matrix ik(stats.n + stats.m, stats.n);
  ik << Matrix::Identity(stats.n, stats.n), k;
  Eigen::LLT<Matrix> llt(stats.sigma_D0.mat());
  if (llt.info() != Eigen::Success) throw SingularCovariance("sigma_D0 is singular");
  const Matrix weighted = llt.solve(ik * p.mat() * ik.transpose());
  return lambda * weighted.trace();
}

EffectBreakdown param_effect_closed(const Matrix& k, const Matrix& a_cl, const SymMatrix& p, const DataStats& stats,
                                    const RegWeights& w) {
  w.validate();
  if (k.rows() != stats.m || k.cols() != stats.n || a_cl.rows() != stats.n || a_cl.cols() != stats.n ||
      p.dim() != stats.n) {
    throw DimensionMismatch("param_effect_closed: inconsistent dimensions");
  }
  if (!(p.min_eigenvalue() > 0.0)) throw NotPositiveDefinite("P is not positive definite");
  const SymMatrix p_sqrt = sym_sqrt(p);

  EffectBreakdown out;
  if (w.parameterization == Parameterization::gram) {
    const Matrix dev_a = a_cl - (stats.A_LS + stats.B_LS * k);
    out.h1 = try_term(stats.sigma_dX, "sigma_dX", dev_a, p_sqrt, w.lambda1 > 0.0).value_or(0.0);
  }
  out.h2 = try_term(stats.sigma_dU, "sigma_dU", k - stats.K_LS, p_sqrt, w.lambda2 > 0.0).value_or(0.0);
  out.h3 = try_term(stats.sigma_X0, "sigma_X0", Matrix::Identity(stats.n, stats.n), p_sqrt, w.lambda3 > 0.0)
               .value_or(0.0);

  const double scale = w.ell_scaling ? 1.0 / static_cast<double>(stats.ell) : 1.0;
  out.total = scale * (w.lambda1 * out.h1 + w.lambda2 * out.h2 + w.lambda3 * out.h3);
  return out;
}

OracleCertificate param_effect_oracle(const Matrix& k, const Matrix& a_cl, const SymMatrix& p, const Dataset& d,
                                      double lambda, OracleKind kind) {
  const Eigen::Index n = d.n(), m = d.m(), ell = d.ell();
  if (k.rows() != m || k.cols() != n || a_cl.rows() != n || a_cl.cols() != n || p.dim() != n) {
    throw DimensionMismatch("param_effect_oracle: inconsistent dimensions");
  }
  const SymMatrix p_sqrt = sym_sqrt(p);
  OracleCertificate cert;

  if (kind == OracleKind::covariance) {
    // The auxiliary variable is pinned by K: V = sigma_D0^{-1} [I; K].
    const DataStats stats = compute_stats(d);
    Matrix ik(n + m, n);
    ik << Matrix::Identity(n, n), k;
    Eigen::LLT<Matrix> llt(stats.sigma_D0.mat());
    if (llt.info() != Eigen::Success) throw SingularCovariance("sigma_D0 is singular");
    const Matrix rhs = ik * p_sqrt.mat();
    cert.g_opt = llt.solve(rhs);
    const Matrix d0 = d.D0();
    const Matrix reproduced = d0 * d0.transpose() / static_cast<double>(ell) * cert.g_opt;
    cert.constraint_residual = (rhs - reproduced).norm() / std::max(1.0, rhs.norm());
    cert.objective = eval_reg_covar(k, p, lambda, stats);
    return cert;
  }

  const Matrix dm = d.D();
  Matrix rhs(2 * n + m, n);
  rhs << p_sqrt.mat(), k * p_sqrt.mat(), a_cl * p_sqrt.mat();

  if (kind == OracleKind::full_gram) {
    cert.g_opt = pinv(dm) * rhs;
    cert.objective = lambda * cert.g_opt.squaredNorm();
  } else {
    // min ||Pi g||^2 s.t. D g = r  <=>  [2 Pi, D'; D, 0] [g; nu] = [0; r].
    const Matrix proj = Matrix::Identity(ell, ell) - pinv(d.D0()) * d.D0();
    const Eigen::Index rows = dm.rows();
    Matrix kkt = Matrix::Zero(ell + rows, ell + rows);
    kkt.topLeftCorner(ell, ell) = 2.0 * proj;
    kkt.topRightCorner(ell, rows) = dm.transpose();
    kkt.bottomLeftCorner(rows, ell) = dm;
    Matrix kkt_rhs = Matrix::Zero(ell + rows, n);
    kkt_rhs.bottomRows(rows) = rhs;
    const Matrix sol = pinv(kkt) * kkt_rhs;
    cert.g_opt = sol.topRows(ell);
    cert.objective = lambda * (proj * cert.g_opt).squaredNorm();
  }
  cert.constraint_residual = (rhs - dm * cert.g_opt).norm() / std::max(1.0, rhs.norm());
  if (cert.constraint_residual > 1e-6) {
    throw InfeasibleConstraint("no auxiliary variable reproduces (K, A_cl) from the data (scaled residual " +
                               std::to_string(cert.constraint_residual) + ")");
  }
  return cert;
}

SymMatrix effective_Q(const SymMatrix& q, const RegWeights& w, Eigen::Index ell, const DataStats& stats) {
  w.validate();
  if (w.lambda3 == 0.0) return q;
  const double c = w.ell_scaling ? w.lambda3 / static_cast<double>(ell) : w.lambda3;
  return SymMatrix(q.mat() + c * sym_inverse(stats.sigma_X0, "sigma_X0").mat());
}

}  // namespace ddlqr
