#pragma once

// Lambda sweeps over regularization cases, closed-loop simulation and the
// named experiment presets.

#include <optional>
#include <string>
#include <vector>

#include "ddlqr/harness/experiment.hpp"
#include "ddlqr/synthesis.hpp"

namespace ddlqr::harness {

/// One sweep case: a program plus which regularization weights follow lambda.
/// For the reduced programs the active weights are set to lambda and the rest
/// to zero; the baselines take lambda directly; ce ignores it.
struct CaseSpec {
  Program program = Program::reduced_gram;
  bool use1 = false, use2 = false, use3 = false;
  std::string label;

  /// "{1,2,3}" style subsets. An empty subset is allowed and means "no
  /// regularization". Throws std::invalid_argument for malformed text or a
  /// "1" under the covariance program.
  static CaseSpec reduced_gram(const std::string& subset);
  static CaseSpec reduced_covar(const std::string& subset);
  /// Baselines and ce, labelled by their program name.
  static CaseSpec of(Program p);

  RegWeights weights(double lambda) const;
};

struct LambdaGrid {
  bool include_zero = false;
  double lo = 1e-4;
  double hi = 1e6;
  int points = 41;

  /// Ascending values: optionally 0, then `points` log-spaced values over
  /// [lo, hi]. Throws std::invalid_argument unless 0 < lo <= hi and points >= 1
  /// (points == 1 requires lo == hi).
  std::vector<double> values() const;

  static LambdaGrid fig1() { return {false, 1e-4, 1e6, 41}; }
  static LambdaGrid fig2() { return {true, 1e-4, 1e10, 41}; }
};

struct SweepRow {
  double lambda = 0.0;
  std::string case_label;
  conic::SolveStatus status = conic::SolveStatus::NumericalError;
  Matrix K;
  Matrix A_cl;
  double deviation = 0.0;    ///< ||A_cl - (A_LS + B_LS K)||_F
  double dist_to_kls = 0.0;  ///< ||K - K_LS||_F
  std::optional<double> h2_on_truth;  ///< empty: unstable on the true plant, or no truth given
  bool truth_unstable = false;
  double objective = 0.0;
  double wall_time_s = 0.0;

  bool optimal() const { return status == conic::SolveStatus::Optimal; }
};

struct SweepOptions {
  conic::SolverSettings solver;
  /// Enables h2_on_truth and supplies Q and R; without it both are identity.
  std::optional<PlantModel> truth;
};

/// One row per (case, lambda), ordered by case as given and then by
/// ascending lambda. Non-optimal rows keep their status and carry NaN
/// metrics. Wall time covers program construction and solve.
std::vector<SweepRow> run_sweep(const Dataset& d, const std::vector<CaseSpec>& cases,
                                const std::vector<double>& lambdas, const SweepOptions& opts = {});

/// States x(1), ..., x(steps) of x(k+1) = A_cl x(k). Throws
/// std::invalid_argument when steps < 1 or shapes disagree.
std::vector<Vector> simulate_closed_loop(const Matrix& a_cl, const Vector& x0, int steps);

/// Angle in degrees, within [0, 90], between v and the eigenvector of the
/// largest-magnitude eigenvalue of A_cl. NaN when that eigenvalue is complex.
double dominant_direction_angle(const Matrix& a_cl, const Vector& v);

struct Preset {
  std::string name;
  PaperExperimentConfig cfg;
  std::vector<CaseSpec> cases;
  std::vector<double> lambdas;
};

/// "fig1", "fig2", "fig3", "table1" or "verify". fig1 and verify use seed 42;
/// fig2 and fig3 use seed 3, a draw whose K_LS stabilizes (A_LS, B_LS).
/// Throws std::invalid_argument for other names.
Preset preset(const std::string& name);

/// Text describing whether K_LS stabilizes (A_LS, B_LS), with the spectral
/// radius, for logs and reports.
std::string kls_condition(const DataStats& stats);

}  // namespace ddlqr::harness
