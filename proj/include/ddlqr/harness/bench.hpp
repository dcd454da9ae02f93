#pragma once

// Scaling benchmark: baseline Gram programs against their reduced
// counterparts for growing data length.

#include <string>
#include <vector>

#include "ddlqr/harness/experiment.hpp"
#include "ddlqr/synthesis.hpp"

namespace ddlqr::harness {

struct BenchRow {
  Eigen::Index ell = 0;
  std::string case_label;
  Program program = Program::reduced_gram;
  std::string status;  ///< "Optimal", or the first non-optimal status seen
  int num_vars = 0;
  std::vector<Eigen::Index> block_dims;
  double mean_s = 0.0;
  double min_s = 0.0;
  double max_s = 0.0;
};

struct BenchOptions {
  int repeats = 10;
  double lambda = 1.0;
  conic::SolverSettings solver;
};

/// For every ell, generates the seeded data set (untimed) and times, per
/// case, statistics + program construction + solve. Each case is run once
/// untimed first; the batch size is then doubled until one batch spans
/// 250 ms, and each sample is a batch mean.
/// Cases: baseline-gram vs {1,2,3}, baseline-gram-proj vs {1}.
/// Runs serially. Throws std::invalid_argument when repeats < 1 or ell_list
/// is empty.
std::vector<BenchRow> bench_scaling(const std::vector<Eigen::Index>& ell_list, const PaperExperimentConfig& cfg,
                                    const BenchOptions& opts = {});

struct ScalingVerdict {
  bool reduced_flat = true;          ///< max/min mean time <= 2 per reduced case
  bool baseline_increasing = true;   ///< strictly increasing in ell per baseline case
  bool reduced_dims_invariant = true;
  bool all_optimal = true;
  std::string detail;
};

ScalingVerdict check_scaling(const std::vector<BenchRow>& rows);

/// Header `ell,case,status,num_vars,block_dims,mean_s,min_s,max_s` with
/// block_dims joined by ';'.
std::string format_bench_csv(const std::vector<BenchRow>& rows, bool zero_timing = false);

}  // namespace ddlqr::harness
