#pragma once

// CSV, SVG and JSON artifacts.

#include <filesystem>
#include <string>
#include <vector>

#include "ddlqr/harness/sweep.hpp"

namespace ddlqr::harness {

struct CsvOptions {
  /// Write 0 in wall_time_s so repeated runs produce identical files.
  bool zero_timing = false;
};

/// Header `case,lambda,status,k_11..k_mn,acl_11..acl_nn,deviation,dist_to_kls,
/// h2_on_truth,objective,wall_time_s`; reals use 17 significant digits,
/// h2_on_truth is "unstable" when the true closed loop is unstable and empty
/// without a truth model. Throws std::invalid_argument for an empty table or
/// rows of mixed shape (nothing is written) and IoError when the file cannot
/// be written.
std::string format_sweep_csv(const std::vector<SweepRow>& rows, const CsvOptions& opts = {});
void emit_csv(const std::vector<SweepRow>& rows, const std::filesystem::path& path, const CsvOptions& opts = {});

/// Vector field of x -> A_cl x - x on a 21 x 21 grid over [-10, 10]^2 drawn
/// as unit-length arrows, plus one polyline per trajectory. Each trajectory
/// lists its points from the initial state on. A_cl must be 2 x 2.
std::string format_svg_phase_portrait(const Matrix& a_cl, const std::vector<std::vector<Vector>>& trajectories,
                                      const std::string& title = {});
void emit_svg_phase_portrait(const Matrix& a_cl, const std::vector<std::vector<Vector>>& trajectories,
                             const std::filesystem::path& path, const std::string& title = {});

/// One polyline per case of `metric` ("deviation", "dist_to_kls",
/// "h2_on_truth", "objective" or "wall_time_s") against lambda on a log axis.
/// Rows with lambda = 0 or no finite positive value are skipped; the value
/// axis is logarithmic. Throws std::invalid_argument for an unknown metric or
/// when no row is plottable.
std::string format_svg_sweep(const std::vector<SweepRow>& rows, const std::string& metric);
void emit_svg_sweep(const std::vector<SweepRow>& rows, const std::string& metric, const std::filesystem::path& path);

/// Context recorded next to a solution.
struct SolutionMeta {
  RegWeights weights;
  double lambda = 0.0;
  bool zero_timing = false;
};

/// Flat JSON object: program, status, n, m, row-major K, P and A_cl,
/// objective, weights and solver diagnostics. NaN entries become null.
std::string format_solution_json(const LqrSolution& sol, const SolutionMeta& meta);
void write_solution_json(const LqrSolution& sol, const SolutionMeta& meta, const std::filesystem::path& path);

/// Writes `text` to `path`, raising IoError on failure.
void write_text(const std::filesystem::path& path, const std::string& text);

}  // namespace ddlqr::harness
