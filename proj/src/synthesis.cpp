#include "ddlqr/synthesis.hpp"

#include <algorithm>
#include <limits>
#include <stdexcept>

#include "ddlqr/errors.hpp"

namespace ddlqr {

using conic::AffineMatrix;

void PlantModel::validate() const {
  const Eigen::Index nn = A.rows();
  if (A.cols() != nn || B.rows() != nn || Q.dim() != nn || R.dim() != B.cols() || nn < 1 || B.cols() < 1) {
    throw DimensionMismatch("PlantModel: inconsistent dimensions");
  }
  auto check_pd = [](const SymMatrix& s, const char* name) {
    if (!(s.min_eigenvalue() > 1e-12 * s.mat().trace())) {
      throw NotPositiveDefinite(std::string("PlantModel: ") + name + " must be positive definite");
    }
  };
  check_pd(Q, "Q");
  check_pd(R, "R");
}

std::string to_string(Program p) {
  switch (p) {
    case Program::model: return "model";
    case Program::reduced_gram: return "reduced-gram";
    case Program::reduced_covar: return "reduced-covar";
    case Program::baseline_gram: return "baseline-gram";
    case Program::baseline_gram_proj: return "baseline-gram-proj";
    case Program::baseline_covar: return "baseline-covar";
    case Program::ce: return "ce";
  }
  return "unknown";
}

Program parse_program(const std::string& name) {
  for (Program p : {Program::model, Program::reduced_gram, Program::reduced_covar, Program::baseline_gram,
                    Program::baseline_gram_proj, Program::baseline_covar, Program::ce}) {
    if (to_string(p) == name) return p;
  }
  throw std::invalid_argument("unknown program '" + name + "'");
}

const SdpLayout::Slot* SdpLayout::find(const std::string& role) const {
  for (const auto& s : slots) {
    if (s.role == role) return &s;
  }
  return nullptr;
}

bool SdpLayout::exhaustive() const {
  std::vector<const Slot*> sorted;
  for (const auto& s : slots) sorted.push_back(&s);
  std::sort(sorted.begin(), sorted.end(), [](const Slot* a, const Slot* b) { return a->offset < b->offset; });
  int next = 0;
  for (const Slot* s : sorted) {
    if (s->offset != next) return false;
    next += s->size();
  }
  return next == num_vars;
}

const LqrSolution& expect_optimal(const LqrSolution& sol) {
  if (!sol.optimal()) {
    throw SynthesisInfeasible(to_string(sol.program) + ": solver returned " + conic::to_string(sol.status));
  }
  return sol;
}

namespace {

class ProgramBuilder {
 public:
  explicit ProgramBuilder(Program p) : program_(p) {}

  AffineMatrix sym(const std::string& role, Eigen::Index n) {
    const int off = problem.add_variables(static_cast<int>(conic::svec_size(n)), role);
    layout_.slots.push_back({role, off, n, n, true});
    return conic::sym_var(off, n);
  }

  AffineMatrix full(const std::string& role, Eigen::Index rows, Eigen::Index cols) {
    const int off = problem.add_variables(static_cast<int>(rows * cols), role);
    layout_.slots.push_back({role, off, rows, cols, false});
    return conic::full_var(off, rows, cols);
  }

  SdpProgram finish() {
    layout_.num_vars = problem.num_vars();
    return SdpProgram{program_, std::move(problem), std::move(layout_)};
  }

  conic::LmiProblem problem;

 private:
  Program program_;
  SdpLayout layout_;
};


AffineMatrix identity(Eigen::Index n) { return AffineMatrix(Matrix(Matrix::Identity(n, n))); }

// Blocks shared by every program: stability over the lifted closed loop,
// P >= I and the input-cost slack L >= Kt P^{-1} Kt'.
void add_lqr_core(ProgramBuilder& b, const AffineMatrix& p, const AffineMatrix& at, const AffineMatrix& kt,
                  const AffineMatrix& l, const SymMatrix& q, const SymMatrix& r) {
  const Eigen::Index n = p.rows();
  b.problem.add_block(conic::sym_block(p - identity(n), at, p), "stability");
  b.problem.add_block(p - identity(n), "P>=I");
  b.problem.add_block(conic::sym_block(l, kt, p), "input-cost");
  b.problem.add_objective(q.mat(), p);
  b.problem.add_objective(r.mat(), l);
}

double term_scale(const RegWeights& w, Eigen::Index ell) {
  return w.ell_scaling ? 1.0 / static_cast<double>(ell) : 1.0;
}

void check_lqr_weights(const SymMatrix& q, const SymMatrix& r, Eigen::Index n, Eigen::Index m) {
  if (q.dim() != n || r.dim() != m) throw DimensionMismatch("Q must be n x n and R m x m");
}

Matrix nan_matrix(Eigen::Index rows, Eigen::Index cols) {
  return Matrix::Constant(rows, cols, std::numeric_limits<double>::quiet_NaN());
}

}  // namespace

SdpProgram build_model_lqr(const PlantModel& pm) {
  pm.validate();
  ProgramBuilder b(Program::model);
  const AffineMatrix p = b.sym("P", pm.n());
  const AffineMatrix kt = b.full("Kt", pm.m(), pm.n());
  const AffineMatrix l = b.sym("L", pm.m());
  add_lqr_core(b, p, pm.A * p + pm.B * kt, kt, l, pm.Q, pm.R);
  return b.finish();
}

SdpProgram build_reduced_gram(const DataStats& stats, const SymMatrix& q, const SymMatrix& r, const RegWeights& w) {
  w.validate();
  if (w.parameterization != Parameterization::gram) {
    throw std::invalid_argument("reduced-gram requires the gram parameterization");
  }
  check_lqr_weights(q, r, stats.n, stats.m);
  const double scale = term_scale(w, stats.ell);
  ProgramBuilder b(Program::reduced_gram);
  const AffineMatrix p = b.sym("P", stats.n);
  const AffineMatrix kt = b.full("Kt", stats.m, stats.n);
  const AffineMatrix at = b.full("At", stats.n, stats.n);
  const AffineMatrix l = b.sym("L", stats.m);
  add_lqr_core(b, p, at, kt, l, q, r);
  if (w.lambda1 > 0.0) {
    const SymMatrix inv = sym_inverse(stats.sigma_dX, "sigma_dX");
    const AffineMatrix mm = b.sym("M", stats.n);
    b.problem.add_block(conic::sym_block(mm, at - (stats.A_LS * p + stats.B_LS * kt), p), "closed-loop-deviation");
    b.problem.add_objective(scale * w.lambda1 * inv.mat(), mm);
  }
  if (w.lambda2 > 0.0) {
    const SymMatrix inv = sym_inverse(stats.sigma_dU, "sigma_dU");
    const AffineMatrix nn = b.sym("N", stats.m);
    b.problem.add_block(conic::sym_block(nn, kt - stats.K_LS * p, p), "gain-deviation");
    b.problem.add_objective(scale * w.lambda2 * inv.mat(), nn);
  }
  if (w.lambda3 > 0.0) {
    b.problem.add_objective(scale * w.lambda3 * sym_inverse(stats.sigma_X0, "sigma_X0").mat(), p);
  }
  return b.finish();
}

SdpProgram build_reduced_covar(const DataStats& stats, const SymMatrix& q, const SymMatrix& r, const RegWeights& w) {
  w.validate();
  if (w.parameterization != Parameterization::covariance) {
    throw std::invalid_argument("reduced-covar requires the covariance parameterization");
  }
  check_lqr_weights(q, r, stats.n, stats.m);
  const double scale = term_scale(w, stats.ell);
  ProgramBuilder b(Program::reduced_covar);
  const AffineMatrix p = b.sym("P", stats.n);
  const AffineMatrix kt = b.full("Kt", stats.m, stats.n);
  const AffineMatrix l = b.sym("L", stats.m);
  add_lqr_core(b, p, stats.A_LS * p + stats.B_LS * kt, kt, l, q, r);
  if (w.lambda2 > 0.0) {
    const SymMatrix inv = sym_inverse(stats.sigma_dU, "sigma_dU");
    const AffineMatrix nn = b.sym("N", stats.m);
    b.problem.add_block(conic::sym_block(nn, kt - stats.K_LS * p, p), "gain-deviation");
    b.problem.add_objective(scale * w.lambda2 * inv.mat(), nn);
  }
  if (w.lambda3 > 0.0) {
    b.problem.add_objective(scale * w.lambda3 * sym_inverse(stats.sigma_X0, "sigma_X0").mat(), p);
  }
  return b.finish();
}

namespace {

// Y = X0^+ P + N_X0 Zy spans exactly the solutions of X0 Y = P.
struct GramSubstitution {
  Matrix x0_pinv;
  Matrix null_x0;
};

GramSubstitution gram_substitution(const Dataset& d) {
  return {pinv(d.X0()), null_space(d.X0())};
}

}  // namespace

SdpProgram build_baseline_gram(const Dataset& d, const DataStats& stats, const SymMatrix& q, const SymMatrix& r,
                               double lambda, bool projected) {
  if (!(lambda >= 0.0)) throw std::invalid_argument("lambda must be non-negative");
  check_lqr_weights(q, r, d.n(), d.m());
  const Eigen::Index n = d.n(), m = d.m(), ell = d.ell();
  const GramSubstitution sub = gram_substitution(d);
  ProgramBuilder b(projected ? Program::baseline_gram_proj : Program::baseline_gram);
  const AffineMatrix p = b.sym("P", n);
  const AffineMatrix zy = b.full("Zy", sub.null_x0.cols(), n);
  const AffineMatrix l = b.sym("L", m);
  const AffineMatrix w = b.sym("W", ell);

  // Multiply the data into the substitution before it meets the unknowns.
  auto lifted = [&](const Matrix& left) { return (left * sub.x0_pinv) * p + (left * sub.null_x0) * zy; };
  const AffineMatrix at = lifted(d.X1());
  const AffineMatrix kt = lifted(d.U0());
  const Matrix pi = projected ? stats.proj_perp : Matrix(Matrix::Identity(ell, ell));
  add_lqr_core(b, p, at, kt, l, q, r);
  // W stands for mu times the slack, mu = min(lambda, 1), so the slack's
  // cost lambda/mu never drops below 1; W >= mu Pi Y P^{-1} Y' Pi.
  const double mu = lambda > 0.0 && lambda < 1.0 ? lambda : 1.0;
  b.problem.add_block(conic::sym_block(w, std::sqrt(mu) * lifted(pi), p), "gram-regularizer");
  b.problem.add_objective((lambda / mu) * Matrix::Identity(ell, ell), w);
  return b.finish();
}

SdpProgram build_baseline_covar(const DataStats& stats, const SymMatrix& q, const SymMatrix& r, double lambda) {
  if (!(lambda >= 0.0)) throw std::invalid_argument("lambda must be non-negative");
  check_lqr_weights(q, r, stats.n, stats.m);
  const Eigen::Index n = stats.n, m = stats.m;
  ProgramBuilder b(Program::baseline_covar);
  const AffineMatrix p = b.sym("P", n);
  const AffineMatrix kt = b.full("Kt", m, n);
  const AffineMatrix l = b.sym("L", m);
  add_lqr_core(b, p, stats.A_LS * p + stats.B_LS * kt, kt, l, q, r);
  if (lambda > 0.0) {
    Eigen::LLT<Matrix> llt(stats.sigma_D0.mat());
    if (llt.info() != Eigen::Success) throw SingularCovariance("sigma_D0 is singular");
    const Matrix inv = llt.solve(Matrix::Identity(n + m, n + m));
    const AffineMatrix z = b.sym("Z", n + m);
    b.problem.add_block(conic::sym_block(z, conic::hcat_vcat({{p}, {kt}}), p), "covariance-regularizer");
    b.problem.add_objective(lambda * 0.5 * (inv + inv.transpose()), z);
  }
  return b.finish();
}

LqrSolution solve_program(const SdpProgram& prog, const conic::SolverSettings& s, const PlantModel* pm,
                          const DataStats* stats, const Dataset* d) {
  const bool gram_baseline = prog.program == Program::baseline_gram || prog.program == Program::baseline_gram_proj;
  const bool ls_closed_loop = prog.program == Program::reduced_covar || prog.program == Program::baseline_covar;
  if ((prog.program == Program::model && pm == nullptr) || (gram_baseline && d == nullptr) ||
      (ls_closed_loop && stats == nullptr)) {
    throw std::invalid_argument("solve_program: missing plant or data for " + to_string(prog.program));
  }
  if (prog.program == Program::ce) throw std::invalid_argument("solve_program: ce is not an SDP; use ce_lqr");

  LqrSolution sol;
  sol.program = prog.program;
  sol.solver = conic::solve(prog.problem, s);
  sol.status = sol.solver.status;
  sol.objective = sol.solver.objective;

  const SdpLayout::Slot* ps = prog.layout.find("P");
  const Eigen::Index n = ps->rows;
  Eigen::Index m = 0;
  if (gram_baseline) {
    m = d->m();
  } else {
    m = prog.layout.find("Kt")->rows;
  }
  auto fail = [&](conic::SolveStatus st) {
    sol.status = st;
    sol.K = nan_matrix(m, n);
    sol.A_cl = nan_matrix(n, n);
    sol.P = SymMatrix::zero(n);
    return sol;
  };
  if (!sol.optimal()) return fail(sol.status);

  const Vector& y = sol.solver.y;
  const Matrix p = conic::smat(y, ps->offset, n);
  Eigen::LLT<Matrix> llt(p);
  if (llt.info() != Eigen::Success) return fail(conic::SolveStatus::NumericalError);
  sol.P = SymMatrix(p);

  Matrix kt, at;
  if (gram_baseline) {
    const GramSubstitution sub = gram_substitution(*d);
    const auto* zs = prog.layout.find("Zy");
    const Matrix yy = sub.x0_pinv * p + sub.null_x0 * conic::read_full(y, zs->offset, zs->rows, zs->cols);
    kt = d->U0() * yy;
    at = d->X1() * yy;
  } else {
    const auto* ks = prog.layout.find("Kt");
    kt = conic::read_full(y, ks->offset, ks->rows, ks->cols);
    if (const auto* as = prog.layout.find("At")) at = conic::read_full(y, as->offset, as->rows, as->cols);
  }
  sol.K = llt.solve(kt.transpose()).transpose();
  if (prog.program == Program::model) {
    sol.A_cl = pm->A + pm->B * sol.K;
  } else if (ls_closed_loop) {
    sol.A_cl = stats->A_LS + stats->B_LS * sol.K;
  } else {
    sol.A_cl = llt.solve(at.transpose()).transpose();
  }
  return sol;
}

LqrSolution model_lqr_sdp(const PlantModel& pm, const conic::SolverSettings& s) {
  return solve_program(build_model_lqr(pm), s, &pm, nullptr, nullptr);
}

LqrSolution synth_reduced_gram(const DataStats& stats, const SymMatrix& q, const SymMatrix& r, const RegWeights& w,
                               const conic::SolverSettings& s) {
  return solve_program(build_reduced_gram(stats, q, r, w), s, nullptr, &stats, nullptr);
}

LqrSolution synth_reduced_covar(const DataStats& stats, const SymMatrix& q, const SymMatrix& r, const RegWeights& w,
                                const conic::SolverSettings& s) {
  return solve_program(build_reduced_covar(stats, q, r, w), s, nullptr, &stats, nullptr);
}

LqrSolution synth_baseline_gram(const Dataset& d, const DataStats& stats, const SymMatrix& q, const SymMatrix& r,
                                double lambda, bool projected, const conic::SolverSettings& s) {
  return solve_program(build_baseline_gram(d, stats, q, r, lambda, projected), s, nullptr, &stats, &d);
}

LqrSolution synth_baseline_covar(const DataStats& stats, const SymMatrix& q, const SymMatrix& r, double lambda,
                                 const conic::SolverSettings& s) {
  return solve_program(build_baseline_covar(stats, q, r, lambda), s, nullptr, &stats, nullptr);
}

LqrSolution ce_lqr(const DataStats& stats, const SymMatrix& q, const SymMatrix& r) {
  check_lqr_weights(q, r, stats.n, stats.m);
  const DareSolution dare = solve_dare(stats.A_LS, stats.B_LS, q, r);
  LqrSolution sol;
  sol.program = Program::ce;
  sol.K = dare.K;
  sol.A_cl = stats.A_LS + stats.B_LS * dare.K;
  sol.P = solve_dlyap(sol.A_cl);
  sol.objective = (q.mat() * sol.P.mat()).trace() + (sol.K.transpose() * r.mat() * sol.K * sol.P.mat()).trace();
  sol.status = conic::SolveStatus::Optimal;
  sol.solver.status = conic::SolveStatus::Optimal;
  sol.solver.iters = dare.iterations;
  return sol;
}

TruthEval evaluate_on_truth(const LqrSolution& sol, const PlantModel& pm) {
  TruthEval out;
  if (!sol.K.allFinite() || sol.K.rows() != pm.m() || sol.K.cols() != pm.n()) {
    out.rho = std::numeric_limits<double>::quiet_NaN();
    return out;
  }
  const Matrix a_cl = pm.A + pm.B * sol.K;
  out.rho = spectral_radius(a_cl);
  if (out.rho < 1.0 - 1e-9) out.h2_sq = h2norm_sq(a_cl, sol.K, pm.Q, pm.R);
  return out;
}

}  // namespace ddlqr
