#include "ddlqr/matlin.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "ddlqr/errors.hpp"

namespace ddlqr {

namespace {

Eigen::SelfAdjointEigenSolver<Matrix> eig(const SymMatrix& s) {
  Eigen::SelfAdjointEigenSolver<Matrix> solver(s.mat());
  if (solver.info() != Eigen::Success) throw NoConvergence("symmetric eigendecomposition failed");
  return solver;
}

SymMatrix from_spectrum(const Eigen::SelfAdjointEigenSolver<Matrix>& solver, const Vector& values) {
  const Matrix& v = solver.eigenvectors();
  Matrix out = v * values.asDiagonal() * v.transpose();
  return SymMatrix(0.5 * (out + out.transpose()));
}

}  // namespace

SymMatrix::SymMatrix(const Matrix& m, double tol) {
  if (m.rows() != m.cols()) throw DimensionMismatch("SymMatrix requires a square matrix");
  if (!m.allFinite()) throw std::invalid_argument("SymMatrix entries must be finite");
  const double scale = std::max(1.0, m.cwiseAbs().maxCoeff());
  const double asym = (m - m.transpose()).cwiseAbs().maxCoeff();
  if (m.size() > 0 && asym > tol * scale) {
    throw AsymmetricInput("matrix asymmetry " + std::to_string(asym) + " exceeds tolerance");
  }
  m_ = 0.5 * (m + m.transpose());
}

double SymMatrix::min_eigenvalue() const {
  if (m_.size() == 0) return 0.0;
  return eig(*this).eigenvalues().minCoeff();
}

double SymMatrix::max_eigenvalue() const {
  if (m_.size() == 0) return 0.0;
  return eig(*this).eigenvalues().maxCoeff();
}

Matrix cholesky(const SymMatrix& s) {
  const Eigen::Index n = s.dim();
  const Matrix& a = s.mat();
  const double max_diag = n > 0 ? a.diagonal().maxCoeff() : 0.0;
  const double floor = 1e-12 * std::max(max_diag, 0.0);
  Matrix t = Matrix::Zero(n, n);
  for (Eigen::Index j = 0; j < n; ++j) {
    double pivot = a(j, j) - t.row(j).head(j).squaredNorm();
    if (!(pivot > floor) || max_diag <= 0.0) {
      throw NotPositiveDefinite("cholesky: pivot " + std::to_string(j) + " is " + std::to_string(pivot));
    }
    const double d = std::sqrt(pivot);
    t(j, j) = d;
    for (Eigen::Index i = j + 1; i < n; ++i) {
      t(i, j) = (a(i, j) - t.row(i).head(j).dot(t.row(j).head(j))) / d;
    }
  }
  return t;
}

SymMatrix sym_sqrt(const SymMatrix& s) {
  if (s.dim() == 0) return s;
  auto solver = eig(s);
  Vector ev = solver.eigenvalues();
  const double norm = ev.cwiseAbs().maxCoeff();
  if (ev.minCoeff() < -1e-10 * norm) {
    throw IndefiniteInput("sym_sqrt: eigenvalue " + std::to_string(ev.minCoeff()) + " is negative");
  }
  return from_spectrum(solver, ev.cwiseMax(0.0).cwiseSqrt());
}

SymMatrix inv_sym_sqrt(const SymMatrix& s, std::string_view label, double rank_tol) {
  auto solver = eig(s);
  const Vector& ev = solver.eigenvalues();
  if (s.dim() == 0 || !(ev.minCoeff() > rank_tol * ev.maxCoeff()) || ev.maxCoeff() <= 0.0) {
    throw NotPositiveDefinite(std::string(label) + " is not positive definite");
  }
  return from_spectrum(solver, ev.cwiseSqrt().cwiseInverse());
}

SymMatrix sym_inverse(const SymMatrix& s, std::string_view label, double rank_tol) {
  auto solver = eig(s);
  const Vector& ev = solver.eigenvalues();
  if (s.dim() == 0 || !(ev.minCoeff() > rank_tol * ev.maxCoeff()) || ev.maxCoeff() <= 0.0) {
    throw NotPositiveDefinite(std::string(label) + " is not positive definite");
  }
  return from_spectrum(solver, ev.cwiseInverse());
}

Matrix pinv(const Matrix& m, double rank_tol) {
  if (m.size() == 0) return Matrix::Zero(m.cols(), m.rows());
  Eigen::JacobiSVD<Matrix> svd(m, Eigen::ComputeThinU | Eigen::ComputeThinV);
  const Vector& sv = svd.singularValues();
  const double cutoff = rank_tol * (sv.size() > 0 ? sv(0) : 0.0);
  Vector inv = Vector::Zero(sv.size());
  for (Eigen::Index i = 0; i < sv.size(); ++i) {
    if (sv(i) > cutoff && sv(i) > 0.0) inv(i) = 1.0 / sv(i);
  }
  return svd.matrixV() * inv.asDiagonal() * svd.matrixU().transpose();
}

Eigen::Index numerical_rank(const Matrix& m, double rank_tol) {
  if (m.size() == 0) return 0;
  Eigen::JacobiSVD<Matrix> svd(m);
  const Vector& sv = svd.singularValues();
  if (sv(0) <= 0.0) return 0;
  return (sv.array() > rank_tol * sv(0)).count();
}

Matrix null_space(const Matrix& m, double rank_tol) {
  Eigen::JacobiSVD<Matrix> svd(m, Eigen::ComputeFullV);
  const Vector& sv = svd.singularValues();
  Eigen::Index rank = 0;
  if (sv.size() > 0 && sv(0) > 0.0) rank = (sv.array() > rank_tol * sv(0)).count();
  return svd.matrixV().rightCols(m.cols() - rank);
}

double spectral_radius(const Matrix& a) {
  if (a.size() == 0) return 0.0;
  Eigen::EigenSolver<Matrix> solver(a, false);
  if (solver.info() != Eigen::Success) throw NoConvergence("eigenvalue computation failed");
  return solver.eigenvalues().cwiseAbs().maxCoeff();
}

SymMatrix solve_dlyap(const Matrix& a_cl) {
  if (a_cl.rows() != a_cl.cols()) throw DimensionMismatch("solve_dlyap: A_cl must be square");
  const double rho = spectral_radius(a_cl);
  if (rho >= 1.0 - 1e-9) {
    throw UnstableMatrix("solve_dlyap: spectral radius " + std::to_string(rho) + " is not below 1");
  }
  const Eigen::Index n = a_cl.rows();
  // vec(A P A') = (A kron A) vec(P), column-major vec.
  Matrix lhs = Matrix::Identity(n * n, n * n);
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = 0; j < n; ++j) {
      lhs.block(i * n, j * n, n, n) -= a_cl(i, j) * a_cl;
    }
  }
  const Matrix eye = Matrix::Identity(n, n);
  const Vector rhs = Eigen::Map<const Vector>(eye.data(), n * n);
  const Vector vec_p = lhs.partialPivLu().solve(rhs);
  const Matrix p = Eigen::Map<const Matrix>(vec_p.data(), n, n);
  return SymMatrix(0.5 * (p + p.transpose()), 1e-6);
}

double dlyap_residual(const Matrix& a_cl, const SymMatrix& p) {
  const Eigen::Index n = a_cl.rows();
  return (a_cl * p.mat() * a_cl.transpose() - p.mat() + Matrix::Identity(n, n)).norm();
}

namespace {

Matrix riccati_gain(const Matrix& a, const Matrix& b, const SymMatrix& r, const Matrix& s) {
  const Matrix bt_s = b.transpose() * s;
  const Matrix gram = r.mat() + bt_s * b;
  return -gram.ldlt().solve(bt_s * a);
}

}  // namespace

DareSolution solve_dare(const Matrix& a, const Matrix& b, const SymMatrix& q, const SymMatrix& r,
                        int max_iterations) {
  const Eigen::Index n = a.rows();
  if (a.cols() != n || b.rows() != n || q.dim() != n || r.dim() != b.cols()) {
    throw DimensionMismatch("solve_dare: inconsistent dimensions");
  }
  const double blowup = 1e14 * std::max(1.0, q.mat().norm());
  Matrix s = q.mat();
  for (int it = 1; it <= max_iterations; ++it) {
    const Matrix k = riccati_gain(a, b, r, s);
    // Q + A'S(A + BK) equals the Riccati map at the minimizing K.
    Matrix next = q.mat() + a.transpose() * s * (a + b * k);
    next = 0.5 * (next + next.transpose());
    if (!next.allFinite() || next.norm() > blowup) {
      throw NoConvergence("solve_dare: Riccati iteration diverged (pair not stabilizable?)");
    }
    const double step = (next - s).norm();
    const double scale = s.norm();
    s = std::move(next);
    if (step <= 1e-12 * scale) {
      DareSolution out{riccati_gain(a, b, r, s), SymMatrix(s), it};
      return out;
    }
  }
  throw NoConvergence("solve_dare: iteration cap reached");
}

double dare_residual(const Matrix& a, const Matrix& b, const SymMatrix& q, const SymMatrix& r,
                     const SymMatrix& s) {
  const Matrix& sm = s.mat();
  const Matrix bt_s_a = b.transpose() * sm * a;
  const Matrix gram = r.mat() + b.transpose() * sm * b;
  const Matrix res = q.mat() + a.transpose() * sm * a - bt_s_a.transpose() * gram.ldlt().solve(bt_s_a) - sm;
  return res.norm() / std::max(1.0, sm.norm());
}

double h2norm_sq(const Matrix& a_cl, const Matrix& k, const SymMatrix& q, const SymMatrix& r) {
  const SymMatrix p = solve_dlyap(a_cl);
  return (q.mat() * p.mat()).trace() + (k.transpose() * r.mat() * k * p.mat()).trace();
}

}  // namespace ddlqr
