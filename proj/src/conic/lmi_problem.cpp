#include "ddlqr/conic/lmi_problem.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <istream>
#include <map>
#include <ostream>
#include <sstream>

#include "ddlqr/errors.hpp"

namespace ddlqr::conic {

namespace {

constexpr double kSymTol = 1e-12;

}  // namespace

LmiProblem::LmiProblem(int num_vars) {
  if (num_vars < 0) throw DimensionMismatch("LmiProblem: negative variable count");
  if (num_vars > 0) add_variables(num_vars, "y");
}

LmiProblem new_problem(int num_vars) { return LmiProblem(num_vars); }

int LmiProblem::add_variables(int count, std::string name) {
  if (count < 0) throw DimensionMismatch("add_variables: negative count");
  const int offset = num_vars();
  groups_.push_back({std::move(name), offset, count});
  c_.conservativeResize(offset + count);
  c_.tail(count).setZero();
  return offset;
}

std::string LmiProblem::var_name(int i) const {
  for (const auto& g : groups_) {
    if (i >= g.offset && i < g.offset + g.count) return g.name + "[" + std::to_string(i - g.offset) + "]";
  }
  return "y[" + std::to_string(i) + "]";
}

void LmiProblem::set_objective(const Vector& c) {
  if (c.size() != num_vars()) throw DimensionMismatch("set_objective: length must equal num_vars");
  c_ = c;
}

void LmiProblem::add_objective(int var, double coef) {
  if (var < 0 || var >= num_vars()) throw DimensionMismatch("add_objective: variable out of range");
  c_(var) += coef;
}

void LmiProblem::add_objective(const Matrix& weight, const AffineMatrix& x) {
  if (weight.rows() != x.rows() || weight.cols() != x.cols()) {
    throw DimensionMismatch("add_objective: weight and expression shapes differ");
  }
  if (x.var_bound() > num_vars()) throw DimensionMismatch("add_objective: expression references unknown variable");
  c0_ += weight.cwiseProduct(x.constant()).sum();
  for (const auto& t : x.terms()) c_(t.var) += weight(t.row, t.col) * t.value;
}

void LmiProblem::push_block(LmiBlock blk) {
  std::sort(blk.coeffs.begin(), blk.coeffs.end(),
            [](const LmiBlock::Coeff& a, const LmiBlock::Coeff& b) { return a.var < b.var; });
  blocks_.push_back(std::move(blk));
}

void LmiProblem::add_block(const std::vector<Matrix>& f, std::string name) {
  if (static_cast<int>(f.size()) != num_vars() + 1) {
    throw DimensionMismatch("add_block: expected " + std::to_string(num_vars() + 1) + " matrices");
  }
  const Eigen::Index d = f.front().rows();
  if (d < 1) throw DimensionMismatch("add_block: block dimension must be positive");
  for (const auto& m : f) {
    if (m.rows() != d || m.cols() != d) throw DimensionMismatch("add_block: F matrices must share a square shape");
    if (!m.allFinite()) throw std::invalid_argument("add_block: non-finite entry");
    const double scale = std::max(1.0, m.cwiseAbs().maxCoeff());
    const double asym = (m - m.transpose()).cwiseAbs().maxCoeff();
    if (asym > kSymTol * scale) throw AsymmetricInput("add_block: F matrix asymmetric by " + std::to_string(asym));
  }
  LmiBlock blk;
  blk.dim = d;
  blk.f0 = 0.5 * (f[0] + f[0].transpose());
  blk.name = std::move(name);
  for (int i = 0; i < num_vars(); ++i) {
    const Matrix& m = f[static_cast<std::size_t>(i) + 1];
    LmiBlock::Coeff co{i, {}, {}};
    for (Eigen::Index c = 0; c < d; ++c) {
      for (Eigen::Index r = 0; r <= c; ++r) {
        const double v = 0.5 * (m(r, c) + m(c, r));
        if (v != 0.0) {
          co.idx.push_back(static_cast<int32_t>(r + c * d));
          co.val.push_back(v);
        }
      }
    }
    if (!co.idx.empty()) blk.coeffs.push_back(std::move(co));
  }
  push_block(std::move(blk));
}

void LmiProblem::add_block(const AffineMatrix& expr_in, std::string name) {
  if (expr_in.rows() != expr_in.cols() || expr_in.rows() < 1) {
    throw DimensionMismatch("add_block: expression must be square and non-empty");
  }
  if (expr_in.var_bound() > num_vars()) throw DimensionMismatch("add_block: expression references unknown variable");
  AffineMatrix expr = expr_in;
  expr.compress();
  const Eigen::Index d = expr.rows();
  const Matrix& f0 = expr.constant();
  {
    const double scale = std::max(1.0, f0.cwiseAbs().maxCoeff());
    const double asym = (f0 - f0.transpose()).cwiseAbs().maxCoeff();
    if (asym > kSymTol * scale) throw AsymmetricInput("add_block: constant term asymmetric by " + std::to_string(asym));
  }

  // Per variable, gather (r, c) -> value then compare against the mirror.
  LmiBlock blk;
  blk.dim = d;
  blk.f0 = 0.5 * (f0 + f0.transpose());
  blk.name = std::move(name);
  const auto& terms = expr.terms();
  for (std::size_t i = 0; i < terms.size();) {
    const int var = terms[i].var;
    std::map<std::pair<int32_t, int32_t>, double> entries;
    double scale = 1.0;
    std::size_t j = i;
    for (; j < terms.size() && terms[j].var == var; ++j) {
      entries[{terms[j].row, terms[j].col}] += terms[j].value;
      scale = std::max(scale, std::abs(terms[j].value));
    }
    LmiBlock::Coeff co{var, {}, {}};
    for (const auto& [rc, v] : entries) {
      const auto [r, c] = rc;
      const auto mirror = entries.find({c, r});
      const double vt = mirror == entries.end() ? 0.0 : mirror->second;
      if (std::abs(v - vt) > kSymTol * scale) {
        throw AsymmetricInput("add_block: coefficient of variable " + var_name(var) + " is asymmetric");
      }
      if (r <= c) {
        const double sym = 0.5 * (v + vt);
        if (sym != 0.0) {
          co.idx.push_back(static_cast<int32_t>(r + static_cast<Eigen::Index>(c) * d));
          co.val.push_back(sym);
        }
      }
    }
    if (!co.idx.empty()) {
      // map order is (row, col); store by column-major offset
      std::vector<std::size_t> order(co.idx.size());
      for (std::size_t t = 0; t < order.size(); ++t) order[t] = t;
      std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return co.idx[a] < co.idx[b]; });
      LmiBlock::Coeff sorted{var, {}, {}};
      for (auto t : order) {
        sorted.idx.push_back(co.idx[t]);
        sorted.val.push_back(co.val[t]);
      }
      blk.coeffs.push_back(std::move(sorted));
    }
    i = j;
  }
  push_block(std::move(blk));
}

Matrix LmiProblem::block_value(std::size_t b, const Vector& y) const {
  const LmiBlock& blk = blocks_.at(b);
  if (y.size() != num_vars()) throw DimensionMismatch("block_value: y length must equal num_vars");
  Matrix upper = Matrix::Zero(blk.dim, blk.dim);
  for (const auto& co : blk.coeffs) {
    const double yi = y(co.var);
    for (std::size_t t = 0; t < co.idx.size(); ++t) upper.data()[co.idx[t]] += yi * co.val[t];
  }
  Matrix full = upper + upper.transpose();
  full.diagonal() -= upper.diagonal();
  return blk.f0 + full;
}

std::vector<Eigen::Index> LmiProblem::block_dims() const {
  std::vector<Eigen::Index> dims;
  for (const auto& b : blocks_) dims.push_back(b.dim);
  return dims;
}

void LmiProblem::dump(std::ostream& out) const {
  char buf[64];
  auto num = [&](double v) {
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return std::string(buf);
  };
  out << num_vars() << "\n";
  for (int i = 0; i < num_vars(); ++i) out << (i ? " " : "") << num(c_(i));
  out << "\n" << blocks_.size();
  for (const auto& b : blocks_) out << " " << b.dim;
  out << "\n";
  for (std::size_t bi = 0; bi < blocks_.size(); ++bi) {
    const auto& b = blocks_[bi];
    for (Eigen::Index c = 0; c < b.dim; ++c) {
      for (Eigen::Index r = 0; r <= c; ++r) {
        if (b.f0(r, c) != 0.0) out << bi << " 0 " << r << " " << c << " " << num(b.f0(r, c)) << "\n";
      }
    }
    for (const auto& co : b.coeffs) {
      for (std::size_t t = 0; t < co.idx.size(); ++t) {
        const auto r = co.idx[t] % b.dim;
        const auto c = co.idx[t] / b.dim;
        out << bi << " " << co.var + 1 << " " << r << " " << c << " " << num(co.val[t]) << "\n";
      }
    }
  }
}

LmiProblem LmiProblem::read_dump(std::istream& in) {
  int k = 0;
  if (!(in >> k) || k < 0) throw ParseError("dump: bad variable count", 1, 1);
  Vector c(k);
  for (int i = 0; i < k; ++i) {
    if (!(in >> c(i))) throw ParseError("dump: bad objective entry", 2, i + 1);
  }
  std::size_t nb = 0;
  if (!(in >> nb)) throw ParseError("dump: bad block count", 3, 1);
  std::vector<Eigen::Index> dims(nb);
  for (auto& d : dims) {
    if (!(in >> d) || d < 1) throw ParseError("dump: bad block dimension", 3, 2);
  }
  std::vector<std::vector<Matrix>> fs(nb);
  for (std::size_t b = 0; b < nb; ++b) fs[b].assign(static_cast<std::size_t>(k) + 1, Matrix::Zero(dims[b], dims[b]));
  std::size_t bi = 0;
  int fi = 0;
  Eigen::Index r = 0, col = 0;
  double v = 0.0;
  int line = 3;
  while (in >> bi >> fi >> r >> col >> v) {
    ++line;
    if (bi >= nb || fi < 0 || fi > k || r < 0 || col < 0 || r >= dims[bi] || col >= dims[bi]) {
      throw ParseError("dump: entry out of range", line, 1);
    }
    Matrix& m = fs[bi][static_cast<std::size_t>(fi)];
    m(r, col) = v;
    m(col, r) = v;
  }
  LmiProblem p(k);
  p.set_objective(c);
  for (std::size_t b = 0; b < nb; ++b) p.add_block(fs[b]);
  return p;
}

}  // namespace ddlqr::conic
