#pragma once

// Dense linear-algebra kernels and matrix-equation solvers.

#include <Eigen/Dense>
#include <string_view>

namespace ddlqr {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;

/// Global numerical-rank threshold, relative to the largest singular value.
inline constexpr double kRankTol = 1e-10;

/// Real symmetric matrix. The stored matrix is exactly symmetric: construction
/// rejects inputs whose asymmetry exceeds `tol * max(1, max|entry|)` and
/// averages away the remainder.
class SymMatrix {
 public:
  SymMatrix() = default;
  explicit SymMatrix(const Matrix& m, double tol = 1e-9);

  static SymMatrix identity(Eigen::Index n) { return SymMatrix(Matrix::Identity(n, n)); }
  static SymMatrix zero(Eigen::Index n) { return SymMatrix(Matrix::Zero(n, n)); }
  static SymMatrix diagonal(const Vector& d) { return SymMatrix(Matrix(d.asDiagonal())); }

  Eigen::Index dim() const { return m_.rows(); }
  const Matrix& mat() const { return m_; }
  double operator()(Eigen::Index i, Eigen::Index j) const { return m_(i, j); }

  double min_eigenvalue() const;
  double max_eigenvalue() const;

 private:
  Matrix m_;
};

/// Lower-triangular T with T*T' = S. Pivots at or below 1e-12 * max diagonal
/// raise NotPositiveDefinite.
Matrix cholesky(const SymMatrix& s);

/// Symmetric PSD square root via eigendecomposition. Eigenvalues below
/// -1e-10*||S|| raise IndefiniteInput; smaller negative ones are clamped to 0.
SymMatrix sym_sqrt(const SymMatrix& s);

/// S^{-1/2}. Raises NotPositiveDefinite (message names `label`) if the smallest
/// eigenvalue is at most rank_tol * the largest.
SymMatrix inv_sym_sqrt(const SymMatrix& s, std::string_view label, double rank_tol = kRankTol);

/// S^{-1} via eigendecomposition with the same failure contract as inv_sym_sqrt.
SymMatrix sym_inverse(const SymMatrix& s, std::string_view label, double rank_tol = kRankTol);

/// Moore-Penrose pseudoinverse via SVD; singular values below
/// rank_tol * sigma_max are treated as zero.
Matrix pinv(const Matrix& m, double rank_tol = kRankTol);

/// Number of singular values above rank_tol * sigma_max.
Eigen::Index numerical_rank(const Matrix& m, double rank_tol = kRankTol);

/// Orthonormal basis of the null space of m (columns), using the same rank rule.
Matrix null_space(const Matrix& m, double rank_tol = kRankTol);

double spectral_radius(const Matrix& a);

/// P solving A P A' - P + I = 0 by Kronecker vectorization.
/// Raises UnstableMatrix if rho(A) >= 1 - 1e-9.
SymMatrix solve_dlyap(const Matrix& a_cl);

/// Residual ||A P A' - P + I||_F.
double dlyap_residual(const Matrix& a_cl, const SymMatrix& p);

struct DareSolution {
  Matrix K;     ///< m x n, feedback u = K x
  SymMatrix S;  ///< Riccati fixed point
  int iterations = 0;
};

/// Discrete algebraic Riccati equation by fixed-point iteration of the Riccati
/// map from S0 = Q, stopping at ||S_{k+1} - S_k||_F <= 1e-12 ||S_k||_F.
/// Returns K = -(R + B'SB)^{-1} B'SA. Raises NoConvergence at the iteration
/// cap or on divergence.
DareSolution solve_dare(const Matrix& a, const Matrix& b, const SymMatrix& q, const SymMatrix& r,
                        int max_iterations = 10000);

/// ||Q + A'SA - A'SB (R + B'SB)^{-1} B'SA - S||_F / max(1, ||S||_F).
double dare_residual(const Matrix& a, const Matrix& b, const SymMatrix& q, const SymMatrix& r,
                     const SymMatrix& s);

/// tr(Q P) + tr(K' R K P) with P = solve_dlyap(A_cl).
double h2norm_sq(const Matrix& a_cl, const Matrix& k, const SymMatrix& q, const SymMatrix& r);

}  // namespace ddlqr
