#include "ddlqr/conic/solver.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <optional>
#include <stdexcept>

#include "ddlqr/kernels.hpp"

namespace ddlqr::conic {

std::string to_string(SolveStatus s) {
  switch (s) {
    case SolveStatus::Optimal: return "Optimal";
    case SolveStatus::Infeasible: return "Infeasible";
    case SolveStatus::Unbounded: return "Unbounded";
    case SolveStatus::MaxIters: return "MaxIters";
    case SolveStatus::NumericalError: return "NumericalError";
  }
  return "Unknown";
}

namespace {

constexpr double kStepFraction = 0.98;
constexpr double kNearFactor = 100.0;
constexpr double kInf = std::numeric_limits<double>::infinity();

struct Block {
  const LmiBlock* src = nullptr;
  Eigen::Index d = 0;
  std::vector<int> vars;                     // compact index of each coefficient
  std::vector<std::vector<double>> weights;  // gather weights: v off the diagonal, v/2 on it
  Matrix S, Z, T;
  Eigen::LLT<Matrix> llt_s, llt_z;
};

Matrix sym(const Matrix& a) { return 0.5 * (a + a.transpose()); }

double inner(const Matrix& a, const Matrix& b) { return a.cwiseProduct(b).sum(); }

// sum_i y_i F_i over one block (no constant term).
Matrix apply_op(const Block& b, const Vector& y) {
  Matrix upper = Matrix::Zero(b.d, b.d);
  const auto& coeffs = b.src->coeffs;
  for (std::size_t p = 0; p < coeffs.size(); ++p) {
    const double yi = y(b.vars[p]);
    if (yi == 0.0) continue;
    const auto& co = coeffs[p];
    for (std::size_t t = 0; t < co.idx.size(); ++t) upper.data()[co.idx[t]] += yi * co.val[t];
  }
  Matrix full = upper + upper.transpose();
  full.diagonal() -= upper.diagonal();
  return full;
}

// out_i += <F_i, X> for symmetric X.
void adjoint_add(const Block& b, const Matrix& x, Vector& out) {
  const auto& k = kernels::active();
  const auto& coeffs = b.src->coeffs;
  for (std::size_t p = 0; p < coeffs.size(); ++p) {
    const auto& co = coeffs[p];
    out(b.vars[p]) += 2.0 * k.gather_dot(b.weights[p].data(), co.idx.data(), x.data(), co.idx.size());
  }
}

// Largest alpha with X + alpha dX >= 0, given the Cholesky factor of X.
double max_step(const Eigen::LLT<Matrix>& llt, const Matrix& dx) {
  const auto l = llt.matrixL();
  const Matrix a = l.solve(dx);
  const Matrix w = sym(l.solve(a.transpose()));
  Eigen::SelfAdjointEigenSolver<Matrix> es(w, Eigen::EigenvaluesOnly);
  const double lmin = es.eigenvalues()(0);
  return lmin >= 0.0 ? kInf : -1.0 / lmin;
}

double coeff_norm(const LmiBlock& blk, const LmiBlock::Coeff& co) {
  double s = 0.0;
  for (std::size_t t = 0; t < co.idx.size(); ++t) {
    const bool diag = co.idx[t] % blk.dim == co.idx[t] / blk.dim;
    s += (diag ? 1.0 : 2.0) * co.val[t] * co.val[t];
  }
  return std::sqrt(s);
}

// Variables that appear in a single block, each as one entry, and together
// fill a whole symmetric principal sub-block (epigraph slacks such as
// W >= Y P^{-1} Y'). Their diagonal part of the Schur complement is the
// operator X -> sym(Z X T) on that sub-block; it is inverted with a Lyapunov
// solve instead of being formed and factored densely.
struct SlackGroup {
  std::size_t block = 0;
  std::vector<Eigen::Index> index;  // principal indices, ascending
  std::vector<int> vars;            // compact variable of each entry
  std::vector<int> row, col;        // entry position within `index`, row <= col
  std::vector<double> val;
  int offset = 0;                   // first slot in the slack numbering
  Matrix V;                         // sym(Z X T) = R  <=>  X = V ((2 V'RV) ./ (d_i + d_j)) V'
  Vector d;
};

constexpr std::size_t kMinSlackDim = 8;

std::vector<SlackGroup> find_slack_groups(const std::vector<Block>& blocks, Eigen::Index k) {
  std::vector<int> seen(static_cast<std::size_t>(k), 0);
  for (const auto& b : blocks) {
    for (int v : b.vars) ++seen[static_cast<std::size_t>(v)];
  }
  std::vector<SlackGroup> groups;
  for (std::size_t bi = 0; bi < blocks.size(); ++bi) {
    const Block& b = blocks[bi];
    std::vector<std::size_t> cand;
    std::vector<char> in_set(static_cast<std::size_t>(b.d), 0);
    for (std::size_t p = 0; p < b.vars.size(); ++p) {
      if (seen[static_cast<std::size_t>(b.vars[p])] == 1 && b.src->coeffs[p].idx.size() == 1) {
        cand.push_back(p);
        const auto e = b.src->coeffs[p].idx[0];
        in_set[static_cast<std::size_t>(e % b.d)] = in_set[static_cast<std::size_t>(e / b.d)] = 1;
      }
    }
    SlackGroup g;
    g.block = bi;
    std::vector<int> pos(static_cast<std::size_t>(b.d), -1);
    for (Eigen::Index i = 0; i < b.d; ++i) {
      if (in_set[static_cast<std::size_t>(i)]) {
        pos[static_cast<std::size_t>(i)] = static_cast<int>(g.index.size());
        g.index.push_back(i);
      }
    }
    const std::size_t dim = g.index.size();
    if (dim < kMinSlackDim || cand.size() != dim * (dim + 1) / 2) continue;
    std::vector<char> filled(dim * dim, 0);
    bool ok = true;
    for (std::size_t p : cand) {
      const auto e = b.src->coeffs[p].idx[0];
      const int r = pos[static_cast<std::size_t>(e % b.d)], c = pos[static_cast<std::size_t>(e / b.d)];
      char& f = filled[static_cast<std::size_t>(r) * dim + static_cast<std::size_t>(c)];
      if (f) ok = false;
      f = 1;
      g.vars.push_back(b.vars[p]);
      g.row.push_back(std::min(r, c));
      g.col.push_back(std::max(r, c));
      g.val.push_back(b.src->coeffs[p].val[0]);
    }
    if (ok) groups.push_back(std::move(g));
  }
  return groups;
}

// Newton system M dy = rhs with M_ij = <F_i, sym(Z F_j S^{-1})>. Slack-group
// variables are eliminated through their Lyapunov operator; the remaining
// variables carry a dense Schur complement factored by Cholesky.
class SchurSystem {
 public:
  SchurSystem(const std::vector<Block>& blocks, Eigen::Index k) : k_(k), groups_(find_slack_groups(blocks, k)) {
    slot_.assign(static_cast<std::size_t>(k), -1);
    int nw = 0;
    for (auto& g : groups_) {
      g.offset = nw;
      for (std::size_t e = 0; e < g.vars.size(); ++e) slot_[static_cast<std::size_t>(g.vars[e])] = nw++;
    }
    nw_ = nw;
    other_.assign(static_cast<std::size_t>(k), -1);
    for (Eigen::Index i = 0; i < k; ++i) {
      if (slot_[static_cast<std::size_t>(i)] < 0) {
        other_[static_cast<std::size_t>(i)] = static_cast<int>(others_.size());
        others_.push_back(static_cast<int>(i));
      }
    }
    const auto no = static_cast<Eigen::Index>(others_.size());
    moo_.resize(no, no);
    mwo_.resize(nw_, no);
  }

  void assemble(const std::vector<Block>& blocks) {
    moo_.setZero();
    mwo_.setZero();
    const auto& kt = kernels::active();
    for (const auto& b : blocks) {
      const Eigen::Index d = b.d;
      const auto& coeffs = b.src->coeffs;
      // Write F_i = sum_x (a_x e_x' + e_x a_x') over a pivot set x (one side
      // of every entry), so Z F_i T = sum_x (Z a_x)(T e_x)' + (Z e_x)(T a_x)'.
      std::vector<int> pivot_of(static_cast<std::size_t>(d), -1);
      std::vector<Eigen::Index> pivots;
      std::vector<char> seen_r(static_cast<std::size_t>(d)), seen_c(static_cast<std::size_t>(d));
      Matrix gs(d, d), za, ta, zc, tc;
      for (std::size_t p = 0; p < coeffs.size(); ++p) {
        const int op = other_[static_cast<std::size_t>(b.vars[p])];
        if (op < 0) continue;  // slack rows come from the other side
        const auto& co = coeffs[p];
        std::fill(seen_r.begin(), seen_r.end(), 0);
        std::fill(seen_c.begin(), seen_c.end(), 0);
        int nr = 0, nc = 0;
        for (auto e : co.idx) {
          const Eigen::Index r = e % d, c = e / d;
          nr += seen_r[static_cast<std::size_t>(r)] ? 0 : 1;
          nc += seen_c[static_cast<std::size_t>(c)] ? 0 : 1;
          seen_r[static_cast<std::size_t>(r)] = seen_c[static_cast<std::size_t>(c)] = 1;
        }
        const bool by_row = nr < nc;
        pivots.clear();
        for (auto e : co.idx) {
          const Eigen::Index x = by_row ? e % d : e / d;
          if (pivot_of[static_cast<std::size_t>(x)] < 0) {
            pivot_of[static_cast<std::size_t>(x)] = static_cast<int>(pivots.size());
            pivots.push_back(x);
          }
        }
        const auto np = static_cast<Eigen::Index>(pivots.size());
        za.setZero(d, np);
        ta.setZero(d, np);
        zc.resize(d, np);
        tc.resize(d, np);
        for (std::size_t t = 0; t < co.idx.size(); ++t) {
          const Eigen::Index r = co.idx[t] % d, c = co.idx[t] / d;
          const Eigen::Index x = by_row ? r : c, o = by_row ? c : r;
          const int j = pivot_of[static_cast<std::size_t>(x)];
          const double v = r == c ? 0.5 * co.val[t] : co.val[t];
          kt.axpy(v, b.Z.col(o).data(), za.col(j).data(), static_cast<std::size_t>(d));
          kt.axpy(v, b.T.col(o).data(), ta.col(j).data(), static_cast<std::size_t>(d));
        }
        for (Eigen::Index j = 0; j < np; ++j) {
          const auto x = pivots[static_cast<std::size_t>(j)];
          zc.col(j) = b.Z.col(x);
          tc.col(j) = b.T.col(x);
          pivot_of[static_cast<std::size_t>(x)] = -1;
        }
        // Only the symmetric part of Z F_i T is read.
        gs.noalias() = za * tc.transpose();
        gs.noalias() += zc * ta.transpose();
        gs += gs.transpose().eval();
        for (std::size_t q = 0; q < coeffs.size(); ++q) {
          const auto& cq = coeffs[q];
          const int oq = other_[static_cast<std::size_t>(b.vars[q])];
          if (oq >= 0 && q > p) continue;
          const double v = kt.gather_dot(b.weights[q].data(), cq.idx.data(), gs.data(), cq.idx.size());
          if (oq >= 0) {
            moo_(op, oq) += v;
          } else {
            mwo_(slot_[static_cast<std::size_t>(b.vars[q])], op) += v;
          }
        }
      }
    }
    for (auto& g : groups_) {
      const Block& b = blocks[g.block];
      const auto dim = static_cast<Eigen::Index>(g.index.size());
      Matrix zs(dim, dim), ts(dim, dim);
      for (Eigen::Index i = 0; i < dim; ++i) {
        for (Eigen::Index j = 0; j < dim; ++j) {
          zs(i, j) = b.Z(g.index[static_cast<std::size_t>(i)], g.index[static_cast<std::size_t>(j)]);
          ts(i, j) = b.T(g.index[static_cast<std::size_t>(i)], g.index[static_cast<std::size_t>(j)]);
        }
      }
      Eigen::LLT<Matrix> lt(ts);
      const Matrix li = lt.matrixL().solve(Matrix::Identity(dim, dim));
      Eigen::SelfAdjointEigenSolver<Matrix> es(sym(li * zs * li.transpose()));
      g.d = es.eigenvalues();
      g.V = li.transpose() * es.eigenvectors();
    }
  }

  bool factor(double reg) {
    // C = M_ww^{-1} M_wo, then the reduced complement M_oo - M_wo' C.
    cw_.resize(nw_, moo_.cols());
    for (Eigen::Index j = 0; j < moo_.cols(); ++j) {
      cw_.col(j) = apply_slack_inverse(mwo_.col(j));
      if (!cw_.col(j).allFinite()) return false;
    }
    Matrix red = moo_.selfadjointView<Eigen::Lower>();
    if (nw_ > 0) red.noalias() -= mwo_.transpose() * cw_;
    if (reg > 0.0 && red.rows() > 0) {
      const double md = std::max(red.diagonal().cwiseAbs().maxCoeff(), 1e-300);
      for (Eigen::Index i = 0; i < red.rows(); ++i) red(i, i) += reg * std::max(std::abs(red(i, i)), 1e-6 * md);
    }
    llt_.compute(red);
    return llt_.info() == Eigen::Success;
  }

  Vector solve(const Vector& rhs) const {
    Vector bw(nw_), bo(static_cast<Eigen::Index>(others_.size()));
    for (Eigen::Index i = 0; i < k_; ++i) {
      const int w = slot_[static_cast<std::size_t>(i)];
      if (w >= 0) {
        bw(w) = rhs(i);
      } else {
        bo(other_[static_cast<std::size_t>(i)]) = rhs(i);
      }
    }
    const Vector tw = apply_slack_inverse(bw);
    Vector yo = bo;
    if (nw_ > 0) yo.noalias() -= mwo_.transpose() * tw;
    if (yo.size() > 0) yo = llt_.solve(yo);
    Vector yw = tw;
    if (nw_ > 0) yw.noalias() -= cw_ * yo;
    Vector y(k_);
    for (Eigen::Index i = 0; i < k_; ++i) {
      const int w = slot_[static_cast<std::size_t>(i)];
      y(i) = w >= 0 ? yw(w) : yo(other_[static_cast<std::size_t>(i)]);
    }
    return y;
  }

 private:
  // M_ww^{-1} b: decode b into the symmetric R with <F_i, R> = b_i, solve
  // sym(Z X T) = R, and read y_i = X_rc / val_i.
  Vector apply_slack_inverse(const Vector& b) const {
    Vector y(nw_);
    for (const auto& g : groups_) {
      const auto dim = static_cast<Eigen::Index>(g.index.size());
      Matrix r(dim, dim);
      for (std::size_t e = 0; e < g.vars.size(); ++e) {
        const int rr = g.row[e], cc = g.col[e];
        const double bi = b(g.offset + static_cast<Eigen::Index>(e));
        r(rr, cc) = r(cc, rr) = rr == cc ? bi / g.val[e] : bi / (2.0 * g.val[e]);
      }
      Matrix h = 2.0 * g.V.transpose() * r * g.V;
      for (Eigen::Index j = 0; j < dim; ++j) {
        for (Eigen::Index i = 0; i < dim; ++i) h(i, j) /= g.d(i) + g.d(j);
      }
      const Matrix x = g.V * h * g.V.transpose();
      for (std::size_t e = 0; e < g.vars.size(); ++e) {
        y(g.offset + static_cast<Eigen::Index>(e)) = x(g.row[e], g.col[e]) / g.val[e];
      }
    }
    return y;
  }

  Eigen::Index k_;
  std::vector<SlackGroup> groups_;
  std::vector<int> slot_;    // slack numbering, -1 for the rest
  std::vector<int> other_;   // dense numbering, -1 for slacks
  std::vector<int> others_;
  Eigen::Index nw_ = 0;
  Matrix moo_;  // lower triangle
  Matrix mwo_;
  Matrix cw_;
  Eigen::LLT<Matrix, Eigen::Lower> llt_;
};

}  // namespace

ConicSolution solve(const LmiProblem& p, const SolverSettings& s) {
  if (!(s.tol_gap > 0.0) || !(s.tol_feas > 0.0) || s.max_iters < 1) {
    throw std::invalid_argument("SolverSettings: tolerances must be positive and max_iters >= 1");
  }
  const auto t0 = std::chrono::steady_clock::now();
  const int k = p.num_vars();
  const Vector& c = p.objective();
  ConicSolution sol;
  sol.y = Vector::Zero(k);
  sol.objective = p.objective_constant();
  // Last iterate within kNearFactor of every tolerance. A later breakdown
  // falls back to it instead of reporting failure.
  std::optional<ConicSolution> near;
  auto finish = [&](SolveStatus st) {
    if ((st == SolveStatus::NumericalError || st == SolveStatus::MaxIters) && near) {
      sol = *near;
      st = SolveStatus::Optimal;
    }
    sol.status = st;
    sol.wall_time = std::chrono::steady_clock::now() - t0;
    return sol;
  };

  // A variable absent from every block is free: fixed at 0 unless its cost
  // makes the problem unbounded.
  std::vector<int> compact(static_cast<std::size_t>(k), -1);
  for (const auto& blk : p.blocks()) {
    for (const auto& co : blk.coeffs) compact[static_cast<std::size_t>(co.var)] = 0;
  }
  std::vector<int> active;
  for (int i = 0; i < k; ++i) {
    if (compact[static_cast<std::size_t>(i)] == 0) {
      compact[static_cast<std::size_t>(i)] = static_cast<int>(active.size());
      active.push_back(i);
    } else if (c(i) != 0.0) {
      sol.objective = -kInf;
      return finish(SolveStatus::Unbounded);
    }
  }
  const auto ka = static_cast<Eigen::Index>(active.size());

  std::vector<Block> blocks;
  blocks.reserve(p.blocks().size());
  double f0norm2 = 0.0;
  Eigen::Index total_dim = 0;
  for (const auto& blk : p.blocks()) {
    Block b;
    b.src = &blk;
    b.d = blk.dim;
    for (const auto& co : blk.coeffs) {
      b.vars.push_back(compact[static_cast<std::size_t>(co.var)]);
      std::vector<double> w(co.val);
      for (std::size_t t = 0; t < w.size(); ++t) {
        if (co.idx[t] % blk.dim == co.idx[t] / blk.dim) w[t] *= 0.5;
      }
      b.weights.push_back(std::move(w));
    }
    f0norm2 += blk.f0.squaredNorm();
    total_dim += blk.dim;
    blocks.push_back(std::move(b));
  }
  const double f0norm = std::sqrt(f0norm2);

  if (blocks.empty()) return finish(SolveStatus::Optimal);
  if (ka == 0) {
    for (const auto& b : blocks) {
      Eigen::SelfAdjointEigenSolver<Matrix> es(b.src->f0, Eigen::EigenvaluesOnly);
      if (es.eigenvalues()(0) < -s.tol_feas * (1.0 + b.src->f0.norm())) return finish(SolveStatus::Infeasible);
    }
    return finish(SolveStatus::Optimal);
  }

  Vector cc(ka);
  for (Eigen::Index i = 0; i < ka; ++i) cc(i) = c(active[static_cast<std::size_t>(i)]);
  const double cnorm = cc.norm();

  for (auto& b : blocks) {
    const double sd = std::sqrt(static_cast<double>(b.d));
    double fmax = 0.0, cratio = 0.0;
    for (std::size_t q = 0; q < b.vars.size(); ++q) {
      const double fn = coeff_norm(*b.src, b.src->coeffs[q]);
      fmax = std::max(fmax, fn);
      cratio = std::max(cratio, (1.0 + std::abs(cc(b.vars[q]))) / (1.0 + fn));
    }
    const double eta = std::max({10.0, sd, b.src->f0.norm(), fmax});
    const double xi = std::max({10.0, sd, sd * cratio});
    b.S = eta * Matrix::Identity(b.d, b.d);
    b.Z = xi * Matrix::Identity(b.d, b.d);
  }

  Vector yc = Vector::Zero(ka);
  SchurSystem schur(blocks, ka);
  const std::size_t nb = blocks.size();
  std::vector<Matrix> rp(nb), ds(nb), dz(nb), rhs_mat(nb), ds_pred(nb), dz_pred(nb);
  int stalled = 0;

  auto store = [&](double pobj, double gap, double pinf, double dinf, int it) {
    for (Eigen::Index i = 0; i < ka; ++i) sol.y(active[static_cast<std::size_t>(i)]) = yc(i);
    sol.objective = pobj + p.objective_constant();
    sol.gap = gap;
    sol.primal_infeas = pinf;
    sol.dual_infeas = dinf;
    sol.iters = it;
    sol.dual.clear();
    for (const auto& b : blocks) sol.dual.push_back(b.Z);
  };

  for (int it = 0;; ++it) {
    for (auto& b : blocks) {
      b.llt_s.compute(b.S);
      b.llt_z.compute(b.Z);
      if (b.llt_s.info() != Eigen::Success || b.llt_z.info() != Eigen::Success) {
        return finish(SolveStatus::NumericalError);
      }
      b.T = sym(b.llt_s.solve(Matrix::Identity(b.d, b.d)));
    }

    Vector az = Vector::Zero(ka);
    double pnorm2 = 0.0, gap = 0.0, dobj = 0.0;
    std::vector<Matrix> ay(nb);
    for (std::size_t bi = 0; bi < nb; ++bi) {
      const Block& b = blocks[bi];
      adjoint_add(b, b.Z, az);
      ay[bi] = apply_op(b, yc);
      rp[bi] = b.src->f0 + ay[bi] - b.S;
      pnorm2 += rp[bi].squaredNorm();
      gap += inner(b.S, b.Z);
      dobj -= inner(b.src->f0, b.Z);
    }
    const Vector rd = cc - az;
    const double pobj = cc.dot(yc);
    const double pinf = std::sqrt(pnorm2) / (1.0 + f0norm);
    const double dinf = rd.norm() / (1.0 + cnorm);
    if (!std::isfinite(pobj) || !std::isfinite(gap) || !std::isfinite(pinf) || !std::isfinite(dinf)) {
      return finish(SolveStatus::NumericalError);
    }
    store(pobj, gap, pinf, dinf, it);
    if (s.verbose) {
      std::fprintf(stderr, "%4d  pobj %+.10e  dobj %+.10e  gap %.3e  pinf %.3e  dinf %.3e\n", it,
                   pobj + p.objective_constant(), dobj + p.objective_constant(), gap, pinf, dinf);
    }
    if (pinf <= s.tol_feas && dinf <= s.tol_feas && gap <= s.tol_gap * (1.0 + std::abs(sol.objective))) {
      return finish(SolveStatus::Optimal);
    }
    if (pinf <= kNearFactor * s.tol_feas && dinf <= kNearFactor * s.tol_feas &&
        gap <= kNearFactor * s.tol_gap * (1.0 + std::abs(sol.objective))) {
      near = sol;
    }
    // Approximate Farkas certificates: a normalized dual ray Z/dobj with
    // A*(Z) ~ 0, or a normalized primal ray y/(-c'y) with A(y) >= 0.
    if (dobj > 0.0 && az.norm() <= s.tol_feas * dobj) return finish(SolveStatus::Infeasible);
    if (pobj < 0.0) {
      double lmin = kInf;
      for (const auto& a : ay) {
        Eigen::SelfAdjointEigenSolver<Matrix> es(a, Eigen::EigenvaluesOnly);
        lmin = std::min(lmin, es.eigenvalues()(0));
      }
      if (lmin >= -s.tol_feas * -pobj) return finish(SolveStatus::Unbounded);
    }
    if (it >= s.max_iters) return finish(SolveStatus::MaxIters);

    schur.assemble(blocks);
    bool ok = schur.factor(0.0);
    for (double reg = 1e-12; !ok && reg <= 1e-6; reg *= 100.0) ok = schur.factor(reg);
    if (!ok) return finish(SolveStatus::NumericalError);

    // h_b = mu T - sym(dZp dSp T) and r_b = h_b - sym(Z rp T); the Newton
    // system then reads M dy = A*(r) - c, dS = rp + A(dy), dZ = h - Z - sym(Z dS T).
    auto direction = [&](double mu, bool corrector, double& ap, double& ad) {
      Vector rhs = -cc;
      for (std::size_t bi = 0; bi < nb; ++bi) {
        const Block& b = blocks[bi];
        Matrix h = Matrix::Zero(b.d, b.d);
        if (mu != 0.0) h += mu * b.T;
        if (corrector) h -= sym(dz_pred[bi] * ds_pred[bi] * b.T);
        adjoint_add(b, h - sym(b.Z * rp[bi] * b.T), rhs);
        rhs_mat[bi] = std::move(h);
      }
      Vector dy = schur.solve(rhs);
      {
        // One round of refinement; A*(dZ) deviates from c - A*(Z) by exactly
        // this residual, so it feeds straight into the dual infeasibility.
        Vector res = rhs;
        for (const auto& b : blocks) adjoint_add(b, -sym(b.Z * apply_op(b, dy) * b.T), res);
        dy += schur.solve(res);
      }
      ap = kInf;
      ad = kInf;
      for (std::size_t bi = 0; bi < nb; ++bi) {
        const Block& b = blocks[bi];
        ds[bi] = sym(rp[bi] + apply_op(b, dy));
        dz[bi] = sym(rhs_mat[bi] - b.Z - sym(b.Z * ds[bi] * b.T));
        ap = std::min(ap, max_step(b.llt_s, ds[bi]));
        ad = std::min(ad, max_step(b.llt_z, dz[bi]));
      }
      return dy;
    };

    double ap = 0.0, ad = 0.0;
    direction(0.0, false, ap, ad);
    const double app = std::min(1.0, ap), adp = std::min(1.0, ad);
    double gap_pred = 0.0;
    for (std::size_t bi = 0; bi < nb; ++bi) {
      gap_pred += inner(blocks[bi].S + app * ds[bi], blocks[bi].Z + adp * dz[bi]);
      ds_pred[bi] = ds[bi];
      dz_pred[bi] = dz[bi];
    }
    const double ratio = gap > 0.0 ? std::max(0.0, gap_pred / gap) : 0.0;
    const double sigma = std::min(1.0, ratio * ratio * ratio);
    const double mu = sigma * gap / static_cast<double>(total_dim);

    const Vector dy = direction(mu, true, ap, ad);
    if (!dy.allFinite()) return finish(SolveStatus::NumericalError);
    const double step_p = std::min(1.0, kStepFraction * ap);
    const double step_d = std::min(1.0, kStepFraction * ad);
    yc += step_p * dy;
    for (std::size_t bi = 0; bi < nb; ++bi) {
      blocks[bi].S = sym(blocks[bi].S + step_p * ds[bi]);
      blocks[bi].Z = sym(blocks[bi].Z + step_d * dz[bi]);
    }
    stalled = std::max(step_p, step_d) < 1e-8 ? stalled + 1 : 0;
    if (stalled >= 3) return finish(SolveStatus::NumericalError);
  }
}

}  // namespace ddlqr::conic
