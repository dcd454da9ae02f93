#pragma once

// The verification suite behind `ddlqr verify`: one check per acceptance
// criterion, each with a time budget, plus the CSV/SVG artifacts it writes.

#include <filesystem>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "ddlqr/harness/sweep.hpp"

namespace ddlqr::harness {

struct CheckResult {
  int id = 0;
  std::string name;
  bool passed = false;
  bool within_budget = true;
  std::string detail;
  double seconds = 0.0;
  double budget_s = 0.0;

  bool ok() const { return passed && within_budget; }
};

struct VerifyOptions {
  /// Artifacts go here when set; the directory is created if missing.
  std::optional<std::filesystem::path> out_dir;
  bool skip_bench = false;
  int bench_repeats = 3;
  std::vector<Eigen::Index> bench_ells{30, 60, 90, 120};
  conic::SolverSettings solver;
  /// Called after each check completes.
  std::function<void(const CheckResult&)> on_result;
};

CheckResult check_effect_exactness();                                            // 1
CheckResult check_prop1_failure_mode(const conic::SolverSettings& s = {});        // 2
CheckResult check_certainty_equivalence(const conic::SolverSettings& s = {});     // 3
CheckResult check_noiseless_exactness(const conic::SolverSettings& s = {});       // 4
CheckResult check_equivalence_triangle(const VerifyOptions& opts = {});           // 5
CheckResult check_fig1_trend(const VerifyOptions& opts = {});                     // 6
CheckResult check_fig2_endpoints(const VerifyOptions& opts = {});                 // 7
CheckResult check_qtilde_equivalence(const conic::SolverSettings& s = {});        // 8
CheckResult check_table1_scaling(const VerifyOptions& opts = {});                 // 9
CheckResult check_kernel_suite(const conic::SolverSettings& s = {});              // 10
/// Regenerates the deterministic artifacts in memory twice and compares
/// the bytes, and against the files in out_dir when present.
CheckResult check_determinism(const VerifyOptions& opts = {});                    // 11

/// Runs every check in order (9 is reported as skipped and passing only
/// when skip_bench is set) and writes verify_summary.csv to out_dir.
std::vector<CheckResult> run_verify(const VerifyOptions& opts = {});

/// "PASS"/"FAIL" line for one check.
std::string format_check(const CheckResult& r);

/// Smallest eigenvalue over all blocks of the program's LMIs at y.
double min_block_eigenvalue(const conic::LmiProblem& p, const Vector& y);

}  // namespace ddlqr::harness
