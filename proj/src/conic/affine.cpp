#include "ddlqr/conic/affine.hpp"

#include <algorithm>
#include <cmath>
#include <tuple>

#include "ddlqr/errors.hpp"

namespace ddlqr::conic {

AffineMatrix::AffineMatrix(Eigen::Index rows, Eigen::Index cols) : constant_(Matrix::Zero(rows, cols)) {}

AffineMatrix::AffineMatrix(Matrix constant) : constant_(std::move(constant)) {}

void AffineMatrix::add_term(int var, Eigen::Index row, Eigen::Index col, double value) {
  if (row < 0 || col < 0 || row >= rows() || col >= cols() || var < 0) {
    throw DimensionMismatch("AffineMatrix::add_term out of range");
  }
  terms_.push_back({var, static_cast<int32_t>(row), static_cast<int32_t>(col), value});
}

AffineMatrix& AffineMatrix::compress() {
  std::sort(terms_.begin(), terms_.end(), [](const AffineTerm& a, const AffineTerm& b) {
    return std::tie(a.var, a.col, a.row) < std::tie(b.var, b.col, b.row);
  });
  std::size_t out = 0;
  for (std::size_t i = 0; i < terms_.size();) {
    AffineTerm t = terms_[i];
    std::size_t j = i + 1;
    while (j < terms_.size() && terms_[j].var == t.var && terms_[j].row == t.row && terms_[j].col == t.col) {
      t.value += terms_[j].value;
      ++j;
    }
    if (t.value != 0.0) terms_[out++] = t;
    i = j;
  }
  terms_.resize(out);
  return *this;
}

Matrix AffineMatrix::value(const Vector& y) const {
  Matrix out = constant_;
  for (const auto& t : terms_) {
    if (t.var >= y.size()) throw DimensionMismatch("AffineMatrix::value: y too short");
    out(t.row, t.col) += t.value * y(t.var);
  }
  return out;
}

AffineMatrix AffineMatrix::transpose() const {
  AffineMatrix out(Matrix(constant_.transpose()));
  out.terms_.reserve(terms_.size());
  for (const auto& t : terms_) out.terms_.push_back({t.var, t.col, t.row, t.value});
  return out;
}

int AffineMatrix::var_bound() const {
  int bound = 0;
  for (const auto& t : terms_) bound = std::max(bound, t.var + 1);
  return bound;
}

AffineMatrix operator+(const AffineMatrix& a, const AffineMatrix& b) {
  if (a.rows() != b.rows() || a.cols() != b.cols()) throw DimensionMismatch("AffineMatrix +: shape mismatch");
  AffineMatrix out(Matrix(a.constant_ + b.constant_));
  out.terms_ = a.terms_;
  out.terms_.insert(out.terms_.end(), b.terms_.begin(), b.terms_.end());
  return out.compress();
}

AffineMatrix operator-(const AffineMatrix& a) { return -1.0 * a; }

AffineMatrix operator-(const AffineMatrix& a, const AffineMatrix& b) { return a + (-1.0 * b); }

AffineMatrix operator*(double s, const AffineMatrix& a) {
  AffineMatrix out(Matrix(s * a.constant_));
  out.terms_ = a.terms_;
  for (auto& t : out.terms_) t.value *= s;
  return out.compress();
}

AffineMatrix operator*(const Matrix& m, const AffineMatrix& a) {
  if (m.cols() != a.rows()) throw DimensionMismatch("Matrix * AffineMatrix: inner dimension mismatch");
  AffineMatrix out(Matrix(m * a.constant_));
  for (const auto& t : a.terms_) {
    for (Eigen::Index i = 0; i < m.rows(); ++i) {
      const double coef = m(i, t.row);
      if (coef != 0.0) out.terms_.push_back({t.var, static_cast<int32_t>(i), t.col, coef * t.value});
    }
  }
  return out.compress();
}

AffineMatrix operator*(const AffineMatrix& a, const Matrix& m) {
  if (a.cols() != m.rows()) throw DimensionMismatch("AffineMatrix * Matrix: inner dimension mismatch");
  AffineMatrix out(Matrix(a.constant_ * m));
  for (const auto& t : a.terms_) {
    for (Eigen::Index j = 0; j < m.cols(); ++j) {
      const double coef = m(t.col, j);
      if (coef != 0.0) out.terms_.push_back({t.var, t.row, static_cast<int32_t>(j), t.value * coef});
    }
  }
  return out.compress();
}

AffineMatrix hcat_vcat(const std::vector<std::vector<AffineMatrix>>& grid) {
  if (grid.empty() || grid.front().empty()) throw DimensionMismatch("hcat_vcat: empty grid");
  const std::size_t ncols = grid.front().size();
  std::vector<Eigen::Index> row_sizes, col_sizes(ncols);
  for (std::size_t j = 0; j < ncols; ++j) col_sizes[j] = grid.front()[j].cols();
  for (const auto& row : grid) {
    if (row.size() != ncols) throw DimensionMismatch("hcat_vcat: ragged grid");
    row_sizes.push_back(row.front().rows());
    for (std::size_t j = 0; j < ncols; ++j) {
      if (row[j].rows() != row.front().rows() || row[j].cols() != col_sizes[j]) {
        throw DimensionMismatch("hcat_vcat: block shapes do not align");
      }
    }
  }
  Eigen::Index total_rows = 0, total_cols = 0;
  for (auto r : row_sizes) total_rows += r;
  for (auto c : col_sizes) total_cols += c;

  AffineMatrix out(total_rows, total_cols);
  Matrix constant = Matrix::Zero(total_rows, total_cols);
  Eigen::Index r0 = 0;
  for (std::size_t i = 0; i < grid.size(); ++i) {
    Eigen::Index c0 = 0;
    for (std::size_t j = 0; j < ncols; ++j) {
      const auto& blk = grid[i][j];
      constant.block(r0, c0, blk.rows(), blk.cols()) = blk.constant();
      for (const auto& t : blk.terms()) out.add_term(t.var, r0 + t.row, c0 + t.col, t.value);
      c0 += col_sizes[j];
    }
    r0 += row_sizes[i];
  }
  AffineMatrix result(std::move(constant));
  return result + out;
}

AffineMatrix sym_block(const AffineMatrix& a, const AffineMatrix& b, const AffineMatrix& d) {
  return hcat_vcat({{a, b}, {b.transpose(), d}});
}

AffineMatrix sym_var(int offset, Eigen::Index n) {
  AffineMatrix out(n, n);
  const double inv_sqrt2 = 1.0 / std::sqrt(2.0);
  int k = offset;
  for (Eigen::Index c = 0; c < n; ++c) {
    for (Eigen::Index r = 0; r <= c; ++r, ++k) {
      if (r == c) {
        out.add_term(k, r, c, 1.0);
      } else {
        out.add_term(k, r, c, inv_sqrt2);
        out.add_term(k, c, r, inv_sqrt2);
      }
    }
  }
  return out.compress();
}

AffineMatrix full_var(int offset, Eigen::Index rows, Eigen::Index cols) {
  AffineMatrix out(rows, cols);
  for (Eigen::Index c = 0; c < cols; ++c) {
    for (Eigen::Index r = 0; r < rows; ++r) out.add_term(offset + static_cast<int>(r + c * rows), r, c, 1.0);
  }
  return out;
}

Matrix smat(const Vector& y, int offset, Eigen::Index n) {
  Matrix out(n, n);
  const double inv_sqrt2 = 1.0 / std::sqrt(2.0);
  int k = offset;
  for (Eigen::Index c = 0; c < n; ++c) {
    for (Eigen::Index r = 0; r <= c; ++r, ++k) {
      const double v = r == c ? y(k) : y(k) * inv_sqrt2;
      out(r, c) = v;
      out(c, r) = v;
    }
  }
  return out;
}

Matrix read_full(const Vector& y, int offset, Eigen::Index rows, Eigen::Index cols) {
  return Eigen::Map<const Matrix>(y.data() + offset, rows, cols);
}

}  // namespace ddlqr::conic
