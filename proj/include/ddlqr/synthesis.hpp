#pragma once

// LQR synthesis programs: the known-model SDP, the reduced data-driven
// reformulations whose size does not depend on ell, and the Gram/covariance
// baselines whose auxiliary variables grow with ell.
//
// Every program is built in the lifted variables P (closed-loop Gramian),
// Kt = K P and, where needed, At = A_cl P, with slack blocks L >= Kt P^{-1} Kt'
// etc. The optimal gain is recovered as K = Kt P^{-1}.

#include <optional>
#include <string>

#include "ddlqr/conic/solver.hpp"
#include "ddlqr/datamodel.hpp"
#include "ddlqr/effects.hpp"

namespace ddlqr {

struct PlantModel {
  Matrix A;
  Matrix B;
  SymMatrix Q;
  SymMatrix R;

  Eigen::Index n() const { return A.rows(); }
  Eigen::Index m() const { return B.cols(); }

  /// DimensionMismatch on inconsistent shapes, NotPositiveDefinite unless
  /// Q and R have minimum eigenvalue above 1e-12 * trace.
  void validate() const;
};

enum class Program { model, reduced_gram, reduced_covar, baseline_gram, baseline_gram_proj, baseline_covar, ce };

/// CLI spelling: "model", "reduced-gram", ..., "ce".
std::string to_string(Program p);
/// Throws std::invalid_argument for an unknown name.
Program parse_program(const std::string& name);

/// Where each matrix-valued unknown lives inside y.
struct SdpLayout {
  struct Slot {
    std::string role;  ///< "P", "Kt", "At", "L", "M", "N", "Zy", "W", "Z"
    int offset = 0;
    Eigen::Index rows = 0;
    Eigen::Index cols = 0;
    bool symmetric = false;
    int size() const { return static_cast<int>(symmetric ? rows * (rows + 1) / 2 : rows * cols); }
  };

  std::vector<Slot> slots;
  int num_vars = 0;

  const Slot* find(const std::string& role) const;
  /// True when the slots tile [0, num_vars) without overlap.
  bool exhaustive() const;
};

struct SdpProgram {
  Program program = Program::model;
  conic::LmiProblem problem;
  SdpLayout layout;
};

struct LqrSolution {
  Matrix K;
  SymMatrix P;
  Matrix A_cl;
  double objective = 0.0;
  conic::SolveStatus status = conic::SolveStatus::NumericalError;
  conic::ConicSolution solver;
  Program program = Program::model;

  bool optimal() const { return status == conic::SolveStatus::Optimal; }
};

/// Raises SynthesisInfeasible carrying the status when `sol` is not optimal.
const LqrSolution& expect_optimal(const LqrSolution& sol);

// Builders. Each returns the exact LmiProblem that the matching synth_*
// function solves.
SdpProgram build_model_lqr(const PlantModel& pm);
SdpProgram build_reduced_gram(const DataStats& stats, const SymMatrix& q, const SymMatrix& r, const RegWeights& w);
SdpProgram build_reduced_covar(const DataStats& stats, const SymMatrix& q, const SymMatrix& r, const RegWeights& w);
SdpProgram build_baseline_gram(const Dataset& d, const DataStats& stats, const SymMatrix& q, const SymMatrix& r,
                               double lambda, bool projected);
SdpProgram build_baseline_covar(const DataStats& stats, const SymMatrix& q, const SymMatrix& r, double lambda);

/// Solves a built program and recovers (K, P, A_cl). On a non-optimal status
/// the matrices are filled with NaN. `stats` is required for programs whose
/// closed loop is implied by the LS estimates; `d` for the Gram baselines.
LqrSolution solve_program(const SdpProgram& prog, const conic::SolverSettings& s, const PlantModel* pm,
                          const DataStats* stats, const Dataset* d);

LqrSolution model_lqr_sdp(const PlantModel& pm, const conic::SolverSettings& s = {});
LqrSolution synth_reduced_gram(const DataStats& stats, const SymMatrix& q, const SymMatrix& r, const RegWeights& w,
                               const conic::SolverSettings& s = {});
LqrSolution synth_reduced_covar(const DataStats& stats, const SymMatrix& q, const SymMatrix& r, const RegWeights& w,
                                const conic::SolverSettings& s = {});
LqrSolution synth_baseline_gram(const Dataset& d, const DataStats& stats, const SymMatrix& q, const SymMatrix& r,
                                double lambda, bool projected, const conic::SolverSettings& s = {});
LqrSolution synth_baseline_covar(const DataStats& stats, const SymMatrix& q, const SymMatrix& r, double lambda,
                                 const conic::SolverSettings& s = {});

/// Certainty-equivalent LQR: DARE on (A_LS, B_LS), P from the closed-loop
/// Lyapunov equation, objective tr(QP) + tr(K'RKP). Raises NoConvergence.
LqrSolution ce_lqr(const DataStats& stats, const SymMatrix& q, const SymMatrix& r);

struct TruthEval {
  double rho = 0.0;
  std::optional<double> h2_sq;  ///< empty when A + B K is not Schur stable
  bool stable() const { return h2_sq.has_value(); }
};

TruthEval evaluate_on_truth(const LqrSolution& sol, const PlantModel& pm);

}  // namespace ddlqr
