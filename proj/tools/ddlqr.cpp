// Command-line front end: data generation, synthesis, sweeps, portraits,
// benchmarks and the verification suite.

#include <CLI11.hpp>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <iostream>
#include <numbers>
#include <string>
#include <vector>

#include "ddlqr/errors.hpp"
#include "ddlqr/harness/bench.hpp"
#include "ddlqr/harness/experiment.hpp"
#include "ddlqr/harness/output.hpp"
#include "ddlqr/harness/sweep.hpp"
#include "ddlqr/harness/verify.hpp"

using namespace ddlqr;
using namespace ddlqr::harness;

namespace {

Dataset load_or_generate(const std::string& path, const PaperExperimentConfig& cfg) {
  if (!path.empty()) return load_dataset(path);
  return gen_paper_data(cfg);
}

void print_solution(const LqrSolution& sol) {
  std::cout << "status " << conic::to_string(sol.status) << "\n";
  if (!sol.optimal()) return;
  std::cout << "K " << sol.K.format(Eigen::IOFormat(8, Eigen::DontAlignCols, " ", "; ")) << "\n"
            << "objective " << sol.objective << "\n"
            << "spectral radius of A_cl " << spectral_radius(sol.A_cl) << "\n";
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Data-driven LQR synthesis under quadratic regularization"};
  app.require_subcommand(1);

  // gen
  auto* gen = app.add_subcommand("gen", "Generate a seeded data set from the benchmark plant");
  std::string gen_preset = "paper", gen_out, offset_mode = "columns";
  PaperExperimentConfig gen_cfg = PaperExperimentConfig::paper();
  long long gen_ell = 30;
  gen->add_option("--preset", gen_preset, "Plant and protocol preset")->check(CLI::IsMember({"paper"}));
  gen->add_option("--seed", gen_cfg.seed, "Random seed");
  gen->add_option("--ell", gen_ell, "Number of data columns");
  gen->add_option("--noise-std", gen_cfg.noise_std, "Process noise standard deviation");
  gen->add_option("--offset-mode", offset_mode, "How the exploration offset enters X0")
      ->check(CLI::IsMember({"columns", "scalar"}));
  gen->add_option("--out", gen_out, "Output CSV")->required();

  // synth
  auto* synth = app.add_subcommand("synth", "Solve one synthesis program");
  std::string synth_data, synth_program = "reduced-gram", synth_out;
  double l1 = 0.0, l2 = 0.0, l3 = 0.0, lambda = 0.0;
  bool synth_zero = false;
  conic::SolverSettings synth_solver;
  synth->add_option("--data", synth_data, "Data CSV (not needed for model)");
  synth->add_option("--program", synth_program, "model, reduced-gram, reduced-covar, baseline-gram, "
                                                "baseline-gram-proj, baseline-covar or ce");
  synth->add_option("--l1", l1, "Weight of the closed-loop deviation term");
  synth->add_option("--l2", l2, "Weight of the gain deviation term");
  synth->add_option("--l3", l3, "Weight of the exploration term");
  synth->add_option("--lambda", lambda, "Baseline regularization weight");
  synth->add_option("--out", synth_out, "Solution JSON");
  synth->add_flag("--zero-timing", synth_zero, "Write 0 for wall time");
  synth->add_flag("--verbose", synth_solver.verbose, "Print the interior-point iterations");

  // sweep
  auto* sweep = app.add_subcommand("sweep", "Lambda sweep for a named preset");
  std::string sweep_preset = "fig1", sweep_data, sweep_out, sweep_svg;
  double lo = 0.0, hi = 0.0;
  int points = 0;
  bool sweep_zero = false;
  sweep->add_option("--preset", sweep_preset)->check(CLI::IsMember({"fig1", "fig2"}));
  sweep->add_option("--data", sweep_data, "Data CSV; defaults to the preset's seeded data");
  sweep->add_option("--out", sweep_out, "Output CSV")->required();
  sweep->add_option("--svg", sweep_svg, "Also plot the preset's metric to this SVG");
  sweep->add_option("--lambda-lo", lo, "Override the grid's lower end (e.g. 1e-6)");
  sweep->add_option("--lambda-hi", hi, "Override the grid's upper end");
  sweep->add_option("--points", points, "Override the number of log-spaced points");
  sweep->add_flag("--zero-timing", sweep_zero, "Write 0 for wall time");

  // portrait
  auto* portrait = app.add_subcommand("portrait", "Phase portraits for case {3}");
  std::string portrait_preset = "fig3", portrait_data, portrait_dir;
  std::vector<double> portrait_lambdas;
  int steps = 30;
  portrait->add_option("--preset", portrait_preset)->check(CLI::IsMember({"fig3"}));
  portrait->add_option("--data", portrait_data, "Data CSV; defaults to the preset's seeded data");
  portrait->add_option("--lambdas", portrait_lambdas, "Values of lambda3")->delimiter(',');
  portrait->add_option("--steps", steps, "Trajectory length");
  portrait->add_option("--out", portrait_dir, "Output directory")->required();

  // bench
  auto* bench = app.add_subcommand("bench", "Timing of baseline vs reduced programs across ell");
  std::vector<long long> ells{30, 60, 90, 120};
  BenchOptions bench_opts;
  std::string bench_out;
  std::uint64_t bench_seed = 42;
  bench->add_option("--ells", ells, "Data lengths")->delimiter(',');
  bench->add_option("--repeats", bench_opts.repeats, "Timed runs per point");
  bench->add_option("--lambda", bench_opts.lambda, "Regularization weight");
  bench->add_option("--seed", bench_seed, "Random seed");
  bench->add_option("--out", bench_out, "Output CSV");

  // verify
  auto* verify = app.add_subcommand("verify", "Run the verification suite");
  VerifyOptions vopts;
  std::string verify_out;
  verify->add_option("--out", verify_out, "Artifact directory");
  verify->add_flag("--skip-bench", vopts.skip_bench, "Skip the scaling benchmark");
  verify->add_option("--repeats", vopts.bench_repeats, "Benchmark repeats");

  CLI11_PARSE(app, argc, argv);

  try {
    if (*gen) {
      gen_cfg.ell = static_cast<Eigen::Index>(gen_ell);
      gen_cfg.offset_mode = offset_mode == "scalar" ? OffsetMode::scalar : OffsetMode::columns;
      const Dataset d = gen_paper_data(gen_cfg);
      save_dataset(d, gen_out);
      const RankReport rr = check_excitation(d);
      std::cout << "wrote " << gen_out << " (ell " << d.ell() << ", rank D0 " << rr.rank_D0 << ", rank D "
                << rr.rank_D << ")\n";
      if (rr.pe_holds) std::cout << kls_condition(compute_stats(d)) << "\n";
      return 0;
    }

    if (*synth) {
      const PaperExperimentConfig cfg = PaperExperimentConfig::paper();
      const PlantModel pm = cfg.plant();
      const Program prog = parse_program(synth_program);
      LqrSolution sol;
      RegWeights w;
      if (prog == Program::model) {
        sol = model_lqr_sdp(pm, synth_solver);
      } else {
        if (synth_data.empty()) throw std::invalid_argument("--data is required for " + synth_program);
        const Dataset d = load_dataset(synth_data);
        const DataStats st = compute_stats(d);
        switch (prog) {
          case Program::reduced_gram:
            w = RegWeights::gram(l1, l2, l3);
            sol = synth_reduced_gram(st, pm.Q, pm.R, w, synth_solver);
            break;
          case Program::reduced_covar:
            if (l1 != 0.0) throw std::invalid_argument("reduced-covar has no --l1 term");
            w = RegWeights::covariance(l2, l3);
            sol = synth_reduced_covar(st, pm.Q, pm.R, w, synth_solver);
            break;
          case Program::baseline_gram:
          case Program::baseline_gram_proj:
            sol = synth_baseline_gram(d, st, pm.Q, pm.R, lambda, prog == Program::baseline_gram_proj, synth_solver);
            break;
          case Program::baseline_covar:
            sol = synth_baseline_covar(st, pm.Q, pm.R, lambda, synth_solver);
            break;
          case Program::ce:
            sol = ce_lqr(st, pm.Q, pm.R);
            break;
          case Program::model:
            break;
        }
      }
      print_solution(sol);
      if (!synth_out.empty()) write_solution_json(sol, SolutionMeta{w, lambda, synth_zero}, synth_out);
      return sol.optimal() ? 0 : 2;
    }

    if (*sweep) {
      const Preset p = preset(sweep_preset);
      LambdaGrid grid = sweep_preset == "fig1" ? LambdaGrid::fig1() : LambdaGrid::fig2();
      if (lo > 0.0) grid.lo = lo;
      if (hi > 0.0) grid.hi = hi;
      if (points > 0) grid.points = points;
      const Dataset d = load_or_generate(sweep_data, p.cfg);
      std::cout << kls_condition(compute_stats(d)) << "\n";
      SweepOptions so;
      so.truth = p.cfg.plant();
      const std::vector<SweepRow> rows = run_sweep(d, p.cases, grid.values(), so);
      emit_csv(rows, sweep_out, CsvOptions{sweep_zero});
      if (!sweep_svg.empty()) emit_svg_sweep(rows, sweep_preset == "fig1" ? "deviation" : "dist_to_kls", sweep_svg);
      int optimal = 0;
      for (const auto& r : rows) optimal += r.optimal() ? 1 : 0;
      std::cout << "wrote " << rows.size() << " rows (" << optimal << " optimal) to " << sweep_out << "\n";
      return 0;
    }

    if (*portrait) {
      const Preset p = preset(portrait_preset);
      const std::vector<double> lambdas = portrait_lambdas.empty() ? p.lambdas : portrait_lambdas;
      const Dataset d = load_or_generate(portrait_data, p.cfg);
      const DataStats st = compute_stats(d);
      std::filesystem::create_directories(portrait_dir);
      for (double lam : lambdas) {
        const LqrSolution sol = synth_reduced_covar(st, p.cfg.Q, p.cfg.R, p.cases.front().weights(lam));
        if (!sol.optimal()) {
          std::cout << "lambda " << lam << ": " << conic::to_string(sol.status) << ", skipped\n";
          continue;
        }
        std::vector<std::vector<Vector>> trajs;
        for (int i = 0; i < 8; ++i) {
          Vector x0(2);
          x0 << 9.0 * std::cos(i * std::numbers::pi / 4), 9.0 * std::sin(i * std::numbers::pi / 4);
          std::vector<Vector> tr{x0};
          for (auto& x : simulate_closed_loop(sol.A_cl, x0, steps)) tr.push_back(x);
          trajs.push_back(std::move(tr));
        }
        char name[64];
        std::snprintf(name, sizeof name, "portrait_lambda_%g.svg", lam);
        const auto path = std::filesystem::path(portrait_dir) / name;
        char title[64];
        std::snprintf(title, sizeof title, "{3}, lambda = %g", lam);
        emit_svg_phase_portrait(sol.A_cl, trajs, path, title);
        std::cout << "lambda " << lam << ": angle to v " << dominant_direction_angle(sol.A_cl, p.cfg.v)
                  << " deg, wrote " << path.string() << "\n";
      }
      return 0;
    }

    if (*bench) {
      PaperExperimentConfig cfg = PaperExperimentConfig::paper();
      cfg.seed = bench_seed;
      std::vector<Eigen::Index> e(ells.begin(), ells.end());
      const std::vector<BenchRow> rows = bench_scaling(e, cfg, bench_opts);
      const std::string csv = format_bench_csv(rows);
      if (!bench_out.empty()) write_text(bench_out, csv);
      std::cout << csv;
      const ScalingVerdict v = check_scaling(rows);
      std::cout << v.detail << "\n";
      return 0;
    }

    if (*verify) {
      if (!verify_out.empty()) vopts.out_dir = verify_out;
      vopts.on_result = [](const CheckResult& r) { std::cout << format_check(r) << std::endl; };
      bool all = true;
      for (const auto& r : run_verify(vopts)) all = all && r.ok();
      return all ? 0 : 1;
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
