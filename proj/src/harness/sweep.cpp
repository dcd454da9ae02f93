#include "ddlqr/harness/sweep.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>
#include <stdexcept>

namespace ddlqr::harness {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

CaseSpec parse_subset(Program p, const std::string& subset) {
  CaseSpec cs;
  cs.program = p;
  if (subset.size() < 2 || subset.front() != '{' || subset.back() != '}') {
    throw std::invalid_argument("case subset must look like {1,2,3}: " + subset);
  }
  const std::string body = subset.substr(1, subset.size() - 2);
  std::stringstream ss(body);
  std::string tok;
  while (std::getline(ss, tok, ',')) {
    if (tok == "1") {
      cs.use1 = true;
    } else if (tok == "2") {
      cs.use2 = true;
    } else if (tok == "3") {
      cs.use3 = true;
    } else if (!(tok.empty() && body.empty())) {
      throw std::invalid_argument("case subset must look like {1,2,3}: " + subset);
    }
  }
  if (p == Program::reduced_covar && cs.use1) {
    throw std::invalid_argument("the covariance parameterization has no term 1");
  }
  cs.label = cs.weights(1.0).case_label();
  return cs;
}

}  // namespace

CaseSpec CaseSpec::reduced_gram(const std::string& subset) { return parse_subset(Program::reduced_gram, subset); }

CaseSpec CaseSpec::reduced_covar(const std::string& subset) { return parse_subset(Program::reduced_covar, subset); }

CaseSpec CaseSpec::of(Program p) {
  if (p == Program::reduced_gram || p == Program::reduced_covar) {
    throw std::invalid_argument("CaseSpec::of: reduced programs need a weight subset");
  }
  CaseSpec cs;
  cs.program = p;
  cs.label = to_string(p);
  return cs;
}

RegWeights CaseSpec::weights(double lambda) const {
  const double l1 = use1 ? lambda : 0.0, l2 = use2 ? lambda : 0.0, l3 = use3 ? lambda : 0.0;
  return program == Program::reduced_covar ? RegWeights::covariance(l2, l3) : RegWeights::gram(l1, l2, l3);
}

std::vector<double> LambdaGrid::values() const {
  if (!(lo > 0.0 && lo <= hi) || points < 1 || (points == 1 && lo != hi)) {
    throw std::invalid_argument("LambdaGrid: need 0 < lo <= hi and points >= 1");
  }
  std::vector<double> out;
  if (include_zero) out.push_back(0.0);
  const double a = std::log10(lo), b = std::log10(hi);
  for (int i = 0; i < points; ++i) {
    const double t = points == 1 ? 0.0 : static_cast<double>(i) / (points - 1);
    // Hit the endpoints exactly so grids can be matched by value.
    out.push_back(i == 0 ? lo : i == points - 1 ? hi : std::pow(10.0, a + t * (b - a)));
  }
  return out;
}

std::vector<SweepRow> run_sweep(const Dataset& d, const std::vector<CaseSpec>& cases,
                                const std::vector<double>& lambdas, const SweepOptions& opts) {
  const DataStats stats = compute_stats(d);
  std::vector<double> grid(lambdas);
  std::sort(grid.begin(), grid.end());
  const SymMatrix q = opts.truth ? opts.truth->Q : SymMatrix::identity(d.n());
  const SymMatrix r = opts.truth ? opts.truth->R : SymMatrix::identity(d.m());

  std::vector<SweepRow> rows;
  rows.reserve(cases.size() * grid.size());
  for (const auto& cs : cases) {
    for (double lambda : grid) {
      const auto t0 = std::chrono::steady_clock::now();
      LqrSolution sol;
      switch (cs.program) {
        case Program::reduced_gram:
          sol = synth_reduced_gram(stats, q, r, cs.weights(lambda), opts.solver);
          break;
        case Program::reduced_covar:
          sol = synth_reduced_covar(stats, q, r, cs.weights(lambda), opts.solver);
          break;
        case Program::baseline_gram:
        case Program::baseline_gram_proj:
          sol = synth_baseline_gram(d, stats, q, r, lambda, cs.program == Program::baseline_gram_proj, opts.solver);
          break;
        case Program::baseline_covar:
          sol = synth_baseline_covar(stats, q, r, lambda, opts.solver);
          break;
        case Program::ce:
          sol = ce_lqr(stats, q, r);
          break;
        case Program::model:
          if (!opts.truth) throw std::invalid_argument("run_sweep: the model case needs a true plant");
          sol = model_lqr_sdp(*opts.truth, opts.solver);
          break;
      }
      SweepRow row;
      row.wall_time_s = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
      row.lambda = lambda;
      row.case_label = cs.label;
      row.status = sol.status;
      row.K = sol.K;
      row.A_cl = sol.A_cl;
      if (sol.optimal()) {
        row.deviation = (sol.A_cl - (stats.A_LS + stats.B_LS * sol.K)).norm();
        row.dist_to_kls = (sol.K - stats.K_LS).norm();
        row.objective = sol.objective;
        if (opts.truth) {
          const TruthEval te = evaluate_on_truth(sol, *opts.truth);
          row.h2_on_truth = te.h2_sq;
          row.truth_unstable = !te.stable();
        }
      } else {
        row.deviation = row.dist_to_kls = row.objective = kNaN;
      }
      rows.push_back(std::move(row));
    }
  }
  return rows;
}

std::vector<Vector> simulate_closed_loop(const Matrix& a_cl, const Vector& x0, int steps) {
  if (steps < 1) throw std::invalid_argument("simulate_closed_loop: steps must be >= 1");
  if (a_cl.rows() != a_cl.cols() || a_cl.cols() != x0.size()) {
    throw std::invalid_argument("simulate_closed_loop: A_cl must be square and match x0");
  }
  std::vector<Vector> traj;
  traj.reserve(static_cast<std::size_t>(steps));
  Vector x = x0;
  for (int k = 0; k < steps; ++k) {
    x = a_cl * x;
    traj.push_back(x);
  }
  return traj;
}

double dominant_direction_angle(const Matrix& a_cl, const Vector& v) {
  Eigen::EigenSolver<Matrix> es(a_cl);
  const auto& ev = es.eigenvalues();
  Eigen::Index best = 0;
  for (Eigen::Index i = 1; i < ev.size(); ++i) {
    if (std::abs(ev(i)) > std::abs(ev(best))) best = i;
  }
  if (std::abs(ev(best).imag()) > 1e-12 * std::max(1.0, std::abs(ev(best)))) return kNaN;
  const Vector w = es.eigenvectors().col(best).real();
  const double c = std::min(1.0, std::abs(w.dot(v)) / (w.norm() * v.norm()));
  return std::acos(c) * 180.0 / std::numbers::pi;
}

Preset preset(const std::string& name) {
  Preset p;
  p.name = name;
  p.cfg = PaperExperimentConfig::paper();
  if (name == "fig1") {
    for (const char* s : {"{1,2,3}", "{1}", "{1,2}", "{1,3}"}) p.cases.push_back(CaseSpec::reduced_gram(s));
    p.cases.push_back(CaseSpec::of(Program::baseline_gram));
    p.cases.push_back(CaseSpec::of(Program::baseline_gram_proj));
    p.lambdas = LambdaGrid::fig1().values();
  } else if (name == "fig2") {
    p.cfg.seed = 3;
    p.cases.push_back(CaseSpec::reduced_covar("{2,3}"));
    p.cases.push_back(CaseSpec::reduced_covar("{2}"));
    p.cases.push_back(CaseSpec::of(Program::baseline_covar));
    p.lambdas = LambdaGrid::fig2().values();
  } else if (name == "fig3") {
    p.cfg.seed = 3;
    p.cases.push_back(CaseSpec::reduced_covar("{3}"));
    p.lambdas = {0.0, 1.0, 10.0, 100.0, 1000.0};
  } else if (name == "table1") {
    p.cases.push_back(CaseSpec::of(Program::baseline_gram));
    p.cases.push_back(CaseSpec::reduced_gram("{1,2,3}"));
    p.cases.push_back(CaseSpec::of(Program::baseline_gram_proj));
    p.cases.push_back(CaseSpec::reduced_gram("{1}"));
    p.lambdas = {1.0};
  } else if (name == "verify") {
    p.cases.push_back(CaseSpec::reduced_gram("{1,2,3}"));
    p.cases.push_back(CaseSpec::of(Program::baseline_gram));
    p.cases.push_back(CaseSpec::reduced_gram("{1}"));
    p.cases.push_back(CaseSpec::of(Program::baseline_gram_proj));
    p.cases.push_back(CaseSpec::reduced_covar("{2,3}"));
    p.cases.push_back(CaseSpec::of(Program::baseline_covar));
    p.lambdas = {1e-3, 1e-1, 1e1, 1e3};
  } else {
    throw std::invalid_argument("unknown preset: " + name);
  }
  return p;
}

std::string kls_condition(const DataStats& stats) {
  const double rho = spectral_radius(stats.A_LS + stats.B_LS * stats.K_LS);
  std::ostringstream os;
  os << "K_LS " << (rho < 1.0 ? "stabilizes" : "does not stabilize") << " (A_LS, B_LS): spectral radius " << rho;
  return os.str();
}

}  // namespace ddlqr::harness
