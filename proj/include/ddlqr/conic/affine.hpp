#pragma once

// Matrix expressions affine in a flat decision vector y. Used by the
// synthesis builders to write LMIs in terms of matrix-valued unknowns.

#include <cstdint>
#include <vector>

#include "ddlqr/matlin.hpp"

namespace ddlqr::conic {

struct AffineTerm {
  int var;
  int32_t row;
  int32_t col;
  double value;
};

/// E(y) = C + sum_t value_t * y[var_t] * e_{row_t} e_{col_t}'.
class AffineMatrix {
 public:
  AffineMatrix() = default;
  AffineMatrix(Eigen::Index rows, Eigen::Index cols);
  explicit AffineMatrix(Matrix constant);

  Eigen::Index rows() const { return constant_.rows(); }
  Eigen::Index cols() const { return constant_.cols(); }
  const Matrix& constant() const { return constant_; }
  const std::vector<AffineTerm>& terms() const { return terms_; }

  void add_term(int var, Eigen::Index row, Eigen::Index col, double value);

  /// Sorts terms by (var, col, row), merges duplicates and drops zeros.
  AffineMatrix& compress();

  Matrix value(const Vector& y) const;
  AffineMatrix transpose() const;

  /// Largest variable index referenced plus one (0 when constant).
  int var_bound() const;

  friend AffineMatrix operator+(const AffineMatrix& a, const AffineMatrix& b);
  friend AffineMatrix operator-(const AffineMatrix& a, const AffineMatrix& b);
  friend AffineMatrix operator-(const AffineMatrix& a);
  friend AffineMatrix operator*(double s, const AffineMatrix& a);
  friend AffineMatrix operator*(const Matrix& m, const AffineMatrix& a);
  friend AffineMatrix operator*(const AffineMatrix& a, const Matrix& m);

 private:
  Matrix constant_;
  std::vector<AffineTerm> terms_;
};

/// Grid of blocks; every row of the grid must share a row count and every
/// column a column count.
AffineMatrix hcat_vcat(const std::vector<std::vector<AffineMatrix>>& grid);

/// [[a, b], [b', d]]
AffineMatrix sym_block(const AffineMatrix& a, const AffineMatrix& b, const AffineMatrix& d);

/// Symmetric n x n unknown stored as svec: the upper triangle column by
/// column, off-diagonal entries scaled by sqrt(2). Occupies n(n+1)/2
/// variables starting at `offset`.
AffineMatrix sym_var(int offset, Eigen::Index n);

/// General rows x cols unknown, column-major, rows*cols variables.
AffineMatrix full_var(int offset, Eigen::Index rows, Eigen::Index cols);

inline Eigen::Index svec_size(Eigen::Index n) { return n * (n + 1) / 2; }

/// Inverse of the sym_var packing.
Matrix smat(const Vector& y, int offset, Eigen::Index n);

/// Reads a full_var block out of y.
Matrix read_full(const Vector& y, int offset, Eigen::Index rows, Eigen::Index cols);

}  // namespace ddlqr::conic
