#include "ddlqr/harness/bench.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <map>
#include <sstream>
#include <stdexcept>

namespace ddlqr::harness {

namespace {

constexpr double kMinBatch = 0.25;

struct BenchCase {
  std::string label;
  Program program;
  RegWeights weights;
};

std::vector<BenchCase> bench_cases(double lambda) {
  return {
      {to_string(Program::baseline_gram), Program::baseline_gram, {}},
      {"{1,2,3}", Program::reduced_gram, RegWeights::gram(lambda, lambda, lambda)},
      {to_string(Program::baseline_gram_proj), Program::baseline_gram_proj, {}},
      {"{1}", Program::reduced_gram, RegWeights::gram(lambda, 0.0, 0.0)},
  };
}

bool is_baseline(Program p) { return p == Program::baseline_gram || p == Program::baseline_gram_proj; }

std::string fmt(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.6g", x);
  return buf;
}

}  // namespace

std::vector<BenchRow> bench_scaling(const std::vector<Eigen::Index>& ell_list, const PaperExperimentConfig& cfg,
                                    const BenchOptions& opts) {
  if (opts.repeats < 1) throw std::invalid_argument("bench_scaling: repeats must be >= 1");
  if (ell_list.empty()) throw std::invalid_argument("bench_scaling: empty ell list");
  const PlantModel pm = cfg.plant();
  std::vector<BenchRow> rows;
  for (Eigen::Index ell : ell_list) {
    PaperExperimentConfig c = cfg;
    c.ell = ell;
    const Dataset d = gen_paper_data(c);
    for (const auto& bc : bench_cases(opts.lambda)) {
      BenchRow row;
      row.ell = ell;
      row.case_label = bc.label;
      row.program = bc.program;
      row.status = "Optimal";
      auto run = [&]() {
        const DataStats stats = compute_stats(d);
        const SdpProgram prog = is_baseline(bc.program)
                                    ? build_baseline_gram(d, stats, pm.Q, pm.R, opts.lambda,
                                                          bc.program == Program::baseline_gram_proj)
                                    : build_reduced_gram(stats, pm.Q, pm.R, bc.weights);
        const LqrSolution sol = solve_program(prog, opts.solver, nullptr, &stats, &d);
        row.num_vars = prog.problem.num_vars();
        row.block_dims = prog.problem.block_dims();
        if (!sol.optimal() && row.status == "Optimal") row.status = conic::to_string(sol.status);
      };
      // Untimed warm-up, then double the batch until one batch spans
      // kMinBatch. A single cold run is a poor predictor for sub-millisecond
      // solves, so calibration keeps timing warm batches.
      run();
      int batch = 1;
      for (;;) {
        const auto c0 = std::chrono::steady_clock::now();
        for (int i = 0; i < batch; ++i) run();
        const double span = std::chrono::duration<double>(std::chrono::steady_clock::now() - c0).count();
        if (span >= kMinBatch || batch >= (1 << 20)) break;
        batch *= 2;
      }
      std::vector<double> times;
      for (int r = 0; r < opts.repeats; ++r) {
        const auto t0 = std::chrono::steady_clock::now();
        for (int i = 0; i < batch; ++i) run();
        times.push_back(std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count() / batch);
      }
      double sum = 0.0;
      for (double t : times) sum += t;
      row.mean_s = sum / static_cast<double>(times.size());
      row.min_s = *std::min_element(times.begin(), times.end());
      row.max_s = *std::max_element(times.begin(), times.end());
      rows.push_back(std::move(row));
    }
  }
  return rows;
}

ScalingVerdict check_scaling(const std::vector<BenchRow>& rows) {
  ScalingVerdict v;
  std::map<std::string, std::vector<const BenchRow*>> by_case;
  std::vector<std::string> order;
  for (const auto& r : rows) {
    if (!by_case.count(r.case_label)) order.push_back(r.case_label);
    by_case[r.case_label].push_back(&r);
    if (r.status != "Optimal") v.all_optimal = false;
  }
  std::ostringstream os;
  for (const auto& label : order) {
    auto series = by_case[label];
    std::sort(series.begin(), series.end(), [](const BenchRow* a, const BenchRow* b) { return a->ell < b->ell; });
    if (is_baseline(series.front()->program)) {
      bool inc = true;
      for (std::size_t i = 1; i < series.size(); ++i) inc = inc && series[i]->mean_s > series[i - 1]->mean_s;
      v.baseline_increasing = v.baseline_increasing && inc;
      os << label << ": " << (inc ? "increasing" : "not increasing");
    } else {
      double lo = series.front()->mean_s, hi = lo;
      bool same = true;
      for (const auto* r : series) {
        lo = std::min(lo, r->mean_s);
        hi = std::max(hi, r->mean_s);
        same = same && r->num_vars == series.front()->num_vars && r->block_dims == series.front()->block_dims;
      }
      const double ratio = lo > 0.0 ? hi / lo : 0.0;
      v.reduced_flat = v.reduced_flat && lo > 0.0 && ratio <= 2.0;
      v.reduced_dims_invariant = v.reduced_dims_invariant && same;
      os << label << ": max/min " << fmt(ratio) << (same ? ", dims invariant" : ", dims vary");
    }
    os << "; ";
  }
  v.detail = os.str();
  return v;
}

std::string format_bench_csv(const std::vector<BenchRow>& rows, bool zero_timing) {
  std::ostringstream os;
  os << "ell,case,status,num_vars,block_dims,mean_s,min_s,max_s\n";
  for (const auto& r : rows) {
    os << r.ell << ",\"" << r.case_label << "\"," << r.status << ',' << r.num_vars << ',';
    for (std::size_t i = 0; i < r.block_dims.size(); ++i) os << (i ? ";" : "") << r.block_dims[i];
    const double z = 0.0;
    os << ',' << fmt(zero_timing ? z : r.mean_s) << ',' << fmt(zero_timing ? z : r.min_s) << ','
       << fmt(zero_timing ? z : r.max_s) << '\n';
  }
  return os.str();
}

}  // namespace ddlqr::harness
