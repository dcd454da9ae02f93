#pragma once

// Quadratic regularizers on the auxiliary data variables, their closed-form
// parametric effects, and first-principles oracles for those closed forms.
//
// For a candidate (K, A_cl, P) the parametric effect is the smallest
// regularization cost over all auxiliary variables that reproduce (K, A_cl)
// from the data. It splits into three terms:
//
//   h1 = || sigma_dX^{-1/2} (A_cl - (A_LS + B_LS K)) P^{1/2} ||_F^2
//   h2 = || sigma_dU^{-1/2} (K - K_LS) P^{1/2} ||_F^2
//   h3 = || sigma_X0^{-1/2} P^{1/2} ||_F^2
//
// The Gram regularizer lambda*tr(G P G') yields (lambda/ell)(h1 + h2 + h3);
// its projected variant yields (lambda/ell) h1; the covariance regularizer
// yields lambda (h2 + h3).

#include <optional>
#include <string>

#include "ddlqr/datamodel.hpp"

namespace ddlqr {

enum class Parameterization { gram, covariance };

std::string to_string(Parameterization p);

struct RegWeights {
  double lambda1 = 0.0;  ///< closed-loop deviation
  double lambda2 = 0.0;  ///< gain deviation
  double lambda3 = 0.0;  ///< exploration
  Parameterization parameterization = Parameterization::gram;
  bool ell_scaling = true;  ///< divide the terms by ell

  static RegWeights gram(double l1, double l2, double l3) {
    return RegWeights{l1, l2, l3, Parameterization::gram, true};
  }
  static RegWeights covariance(double l2, double l3) {
    return RegWeights{0.0, l2, l3, Parameterization::covariance, false};
  }

  /// Throws std::invalid_argument on negative weights or a nonzero lambda1
  /// under the covariance parameterization.
  void validate() const;

  /// Case label such as "{1,2,3}"; "{}" when every weight is zero.
  std::string case_label() const;
};

struct EffectBreakdown {
  double h1 = 0.0;
  double h2 = 0.0;
  double h3 = 0.0;
  double total = 0.0;
};

/// lambda * || Pi G P^{1/2} ||_F^2, Pi = proj_perp when `projected`, else I.
double eval_reg_gram(const Matrix& g, const SymMatrix& p, double lambda, bool projected, const DataStats& stats);

/// lambda * tr(sigma_D0^{-1} [I; K] P [I; K]'). Raises SingularCovariance.
double eval_reg_covar(const Matrix& k, const SymMatrix& p, double lambda, const DataStats& stats);

/// Closed-form parametric effect. A term whose weight is zero is still
/// evaluated when its covariance is invertible and reported as 0 otherwise;
/// a term with a positive weight raises NotPositiveDefinite naming the
/// singular covariance. Under the covariance parameterization h1 is always 0.
EffectBreakdown param_effect_closed(const Matrix& k, const Matrix& a_cl, const SymMatrix& p, const DataStats& stats,
                                    const RegWeights& w);

enum class OracleKind { full_gram, projected_gram, covariance };

struct OracleCertificate {
  Matrix g_opt;  ///< minimizing G P^{1/2} (ell x n); V P^{1/2} for the covariance kind
  double objective = 0.0;
  double constraint_residual = 0.0;  ///< scaled by max(1, ||rhs||_F)
};

/// Solves the inner minimization over the auxiliary variable directly:
/// minimum-norm least squares for full_gram, a KKT system with minimum-norm
/// resolution for projected_gram, and direct evaluation for covariance
/// (there the A_cl argument is implied by K and ignored). Raises
/// InfeasibleConstraint when the best candidate leaves a scaled constraint
/// residual above 1e-6.
OracleCertificate param_effect_oracle(const Matrix& k, const Matrix& a_cl, const SymMatrix& p, const Dataset& d,
                                      double lambda, OracleKind kind);

/// Q + c * sigma_X0^{-1}, with c = lambda3/ell when w.ell_scaling, else lambda3.
SymMatrix effective_Q(const SymMatrix& q, const RegWeights& w, Eigen::Index ell, const DataStats& stats);

}  // namespace ddlqr
