#pragma once

// Primal-dual interior-point method for LmiProblem.
//
// Primal: minimize c'y  s.t.  S = F0 + sum_i y_i F_i >= 0.
// Dual:   maximize -<F0, Z>  s.t.  <F_i, Z> = c_i,  Z >= 0.
//
// Infeasible-start path following with the HKM search direction and Mehrotra
// predictor-corrector steps. The Schur complement is assembled densely from
// sparse F_i and factored by Cholesky.

#include <chrono>
#include <string>
#include <vector>

#include "ddlqr/conic/lmi_problem.hpp"

namespace ddlqr::conic {

enum class SolveStatus { Optimal, Infeasible, Unbounded, MaxIters, NumericalError };

std::string to_string(SolveStatus s);

struct SolverSettings {
  double tol_gap = 1e-10;
  double tol_feas = 1e-10;
  int max_iters = 200;
  bool verbose = false;
};

struct ConicSolution {
  SolveStatus status = SolveStatus::NumericalError;
  Vector y;
  double objective = 0.0;  ///< c'y plus the problem's objective constant
  double gap = 0.0;        ///< <S, Z>
  double primal_infeas = 0.0;
  double dual_infeas = 0.0;
  int iters = 0;
  std::chrono::duration<double> wall_time{0.0};
  std::vector<Matrix> dual;  ///< Z per block

  bool optimal() const { return status == SolveStatus::Optimal; }
};

/// Never throws for solver outcomes; those are reported through status.
/// If the iteration breaks down after reaching an iterate within 100x of
/// every tolerance, that iterate is returned as Optimal.
/// Raises std::invalid_argument for non-positive tolerances or max_iters < 1.
ConicSolution solve(const LmiProblem& p, const SolverSettings& s = {});

}  // namespace ddlqr::conic
