#pragma once

// Standard-form LMI program: minimize c'y subject to
// F0_b + sum_i y_i F_i,b >= 0 for every block b.

#include <iosfwd>
#include <string>
#include <vector>

#include "ddlqr/conic/affine.hpp"

namespace ddlqr::conic {

struct LmiBlock {
  /// Upper-triangle entries of one F_i, stored at column-major offsets
  /// r + c*dim with r <= c.
  struct Coeff {
    int var;
    std::vector<int32_t> idx;
    std::vector<double> val;
  };

  Eigen::Index dim = 0;
  Matrix f0;                  ///< dense, symmetric
  std::vector<Coeff> coeffs;  ///< sorted by var, one entry per variable present
  std::string name;
};

struct VarGroup {
  std::string name;
  int offset;
  int count;
};

class LmiProblem {
 public:
  LmiProblem() = default;
  explicit LmiProblem(int num_vars);

  /// Appends `count` variables; returns the offset of the first.
  int add_variables(int count, std::string name = {});
  int num_vars() const { return static_cast<int>(c_.size()); }
  const std::vector<VarGroup>& groups() const { return groups_; }
  std::string var_name(int i) const;

  void set_objective(const Vector& c);
  void add_objective(int var, double coef);
  /// Adds <weight, x> = sum_ij weight_ij x_ij(y) to the objective; the
  /// constant part accumulates into objective_constant().
  void add_objective(const Matrix& weight, const AffineMatrix& x);
  const Vector& objective() const { return c_; }
  double objective_constant() const { return c0_; }

  /// f[0] is the constant term, f[i+1] multiplies y_i; f.size() must be
  /// num_vars()+1. Raises DimensionMismatch or AsymmetricInput (max
  /// asymmetry above 1e-12 * max(1, max|F|)).
  void add_block(const std::vector<Matrix>& f, std::string name = {});
  /// Same contract for an affine expression; it must be square and symmetric.
  void add_block(const AffineMatrix& expr, std::string name = {});

  const std::vector<LmiBlock>& blocks() const { return blocks_; }
  Matrix block_value(std::size_t b, const Vector& y) const;
  std::vector<Eigen::Index> block_dims() const;

  /// Text dump. Line 1: k; line 2: c; line 3: block count and dims; then one
  /// line per nonzero upper-triangle entry `block_id f_index i j value`
  /// (f_index 0 is the constant term, indices 0-based).
  void dump(std::ostream& out) const;
  static LmiProblem read_dump(std::istream& in);

 private:
  void push_block(LmiBlock blk);

  Vector c_ = Vector::Zero(0);
  double c0_ = 0.0;
  std::vector<LmiBlock> blocks_;
  std::vector<VarGroup> groups_;
};

LmiProblem new_problem(int num_vars);

}  // namespace ddlqr::conic
