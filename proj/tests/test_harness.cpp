#include <doctest.h>

#include <boost/property_tree/ptree.hpp>
#include <boost/property_tree/xml_parser.hpp>
#include <filesystem>
#include <nlohmann/json.hpp>
#include <sstream>

#include "ddlqr/harness/bench.hpp"
#include "ddlqr/harness/output.hpp"
#include "ddlqr/harness/rng.hpp"
#include "ddlqr/harness/sweep.hpp"
#include "ddlqr/errors.hpp"
#include "support.hpp"

using namespace ddlqr;
using namespace ddlqr::harness;
namespace pt = boost::property_tree;

namespace {

std::filesystem::path temp_dir(const std::string& name) {
  const auto dir = std::filesystem::temp_directory_path() / "ddlqr_tests" / name;
  std::filesystem::remove_all(dir);
  std::filesystem::create_directories(dir);
  return dir;
}

int count_polylines(const pt::ptree& node) {
  int n = 0;
  for (const auto& [key, child] : node) {
    if (key == "polyline") ++n;
    n += count_polylines(child);
  }
  return n;
}

std::vector<SweepRow> small_sweep() {
  const auto cfg = test::plant_cfg(3);
  SweepOptions o;
  o.truth = cfg.plant();
  return run_sweep(gen_paper_data(cfg), {CaseSpec::reduced_gram("{1,2,3}"), CaseSpec::reduced_covar("{2}")},
                   {0.0, 1.0, 100.0}, o);
}

}  // namespace

TEST_SUITE("harness") {

TEST_CASE("Philox4x32-10 known-answer vectors") {
  CHECK(philox4x32_10({0, 0, 0, 0}, {0, 0}) == PhiloxCounter{0x6627e8d5u, 0xe169c58du, 0xbc57ac4cu, 0x9b00dbd8u});
  CHECK(philox4x32_10({0xffffffffu, 0xffffffffu, 0xffffffffu, 0xffffffffu}, {0xffffffffu, 0xffffffffu}) ==
        PhiloxCounter{0x408f276du, 0x41c83b0eu, 0xa20bc7c6u, 0x6d5451fdu});
  CHECK(philox4x32_10({0x243f6a88u, 0x85a308d3u, 0x13198a2eu, 0x03707344u}, {0xa4093822u, 0x299f31d0u}) ==
        PhiloxCounter{0xd16cfe09u, 0x94fdccebu, 0x5001e420u, 0x24126ea1u});
}

TEST_CASE("normal draws look standard") {
  double s = 0.0, s2 = 0.0;
  const int n = 200000;
  for (int i = 0; i < n; ++i) {
    const double z = standard_normal(7, kStreamX, static_cast<std::uint64_t>(i));
    s += z;
    s2 += z * z;
  }
  CHECK(std::abs(s / n) < 0.01);
  CHECK(std::abs(s2 / n - 1.0) < 0.02);
  CHECK(standard_normal(7, kStreamX, 5) == standard_normal(7, kStreamX, 5));
  CHECK(standard_normal(7, kStreamX, 5) != standard_normal(7, kStreamU, 5));
}

TEST_CASE("data generator properties") {
  // Noiseless transitions obey the plant.
  const auto clean_cfg = test::noiseless_cfg();
  const Dataset clean = gen_paper_data(clean_cfg);
  CHECK((clean.X1() - clean_cfg.A * clean.X0() - clean_cfg.B * clean.U0()).norm() <= 1e-12 * clean.X1().norm());

  const auto cfg = test::plant_cfg(42);
  const Dataset d = gen_paper_data(cfg);
  CHECK(check_excitation(d).assumption1_holds);
  CHECK((compute_stats(d).K_LS - cfg.K_expl).norm() <= 0.5 * cfg.K_expl.norm());
  // The offset shifts every column of X0.
  CHECK((d.X0().rowwise().mean() - cfg.offset_scale * cfg.v).norm() < 1.0);

  // Longer data sets extend shorter ones.
  const Dataset longer = gen_paper_data(test::plant_cfg(42, 60));
  CHECK(longer.X0().leftCols(30) == d.X0());
  CHECK(longer.U0().leftCols(30) == d.U0());
  CHECK(longer.X1().leftCols(30) == d.X1());

  auto bad = cfg;
  bad.ell = 2;
  CHECK_THROWS_AS(bad.validate(), std::invalid_argument);
  bad = cfg;
  bad.noise_std = -1.0;
  CHECK_THROWS_AS(gen_paper_data(bad), std::invalid_argument);
}

TEST_CASE("closed-loop simulation") {
  const Matrix a = (Matrix(2, 2) << 0.5, 0.0, 0.0, -0.25).finished();
  const auto traj = simulate_closed_loop(a, Vector::Ones(2), 3);
  REQUIRE(traj.size() == 3);
  CHECK(traj[0] == Vector((Vector(2) << 0.5, -0.25).finished()));
  CHECK((traj[2] - Vector((Vector(2) << 0.125, -0.015625).finished())).norm() == 0.0);
  CHECK_THROWS_AS(simulate_closed_loop(a, Vector::Ones(2), 0), std::invalid_argument);
  CHECK_THROWS_AS(simulate_closed_loop(a, Vector::Ones(3), 2), std::invalid_argument);
  CHECK(dominant_direction_angle(a, (Vector(2) << 1, 0).finished()) == doctest::Approx(0.0));
  CHECK(dominant_direction_angle(a, (Vector(2) << 0, 1).finished()) == doctest::Approx(90.0));
}

TEST_CASE("lambda grids") {
  const auto g1 = LambdaGrid::fig1().values();
  REQUIRE(g1.size() == 41);
  CHECK(g1.front() == doctest::Approx(1e-4));
  CHECK(g1.back() == doctest::Approx(1e6));
  CHECK(g1[20] == doctest::Approx(10.0));
  CHECK(std::is_sorted(g1.begin(), g1.end()));
  const auto g2 = LambdaGrid::fig2().values();
  CHECK(g2.size() == 42);
  CHECK(g2.front() == 0.0);
  CHECK(LambdaGrid{false, 2.0, 2.0, 1}.values() == std::vector<double>{2.0});
  CHECK_THROWS_AS((LambdaGrid{false, 1.0, 2.0, 1}.values()), std::invalid_argument);
  CHECK_THROWS_AS((LambdaGrid{false, 0.0, 2.0, 3}.values()), std::invalid_argument);
}

TEST_CASE("case spec parsing") {
  const CaseSpec c = CaseSpec::reduced_gram("{1,3}");
  CHECK(c.use1);
  CHECK_FALSE(c.use2);
  CHECK(c.use3);
  const RegWeights w = c.weights(2.5);
  CHECK(w.lambda1 == 2.5);
  CHECK(w.lambda2 == 0.0);
  CHECK(w.lambda3 == 2.5);
  CHECK(CaseSpec::reduced_gram("{}").weights(3.0).lambda1 == 0.0);
  CHECK_THROWS_AS(CaseSpec::reduced_covar("{1}"), std::invalid_argument);
  CHECK_THROWS_AS(CaseSpec::reduced_gram("{4}"), std::invalid_argument);
  CHECK_THROWS_AS(CaseSpec::reduced_gram("1,2"), std::invalid_argument);
  CHECK(CaseSpec::of(Program::baseline_gram).label == "baseline-gram");
  CHECK_THROWS_AS(preset("nope"), std::invalid_argument);
  CHECK(preset("fig1").cfg.seed == 42);
  CHECK(preset("fig2").cfg.seed == 3);
}

TEST_CASE("sweep rows: ordering, stability and determinism") {
  const auto rows = small_sweep();
  REQUIRE(rows.size() == 6);
  CHECK(rows[0].case_label == "{1,2,3}");
  CHECK(rows[3].case_label == "{2}");
  CHECK(rows[1].lambda == 1.0);
  for (const auto& r : rows) {
    CAPTURE(r.case_label);
    CAPTURE(r.lambda);
    REQUIRE(r.optimal());
    CHECK(spectral_radius(r.A_cl) < 1.0);
    CHECK(r.deviation >= 0.0);
  }
  const auto again = small_sweep();
  CsvOptions frozen{true};
  CHECK(format_sweep_csv(rows, frozen) == format_sweep_csv(again, frozen));
}

TEST_CASE("gain regularization path moves monotonically toward K_LS") {
  const auto cfg = preset("fig2").cfg;
  const auto rows = run_sweep(gen_paper_data(cfg), {CaseSpec::reduced_covar("{2}")}, LambdaGrid::fig2().values());
  for (std::size_t i = 1; i < rows.size(); ++i) {
    REQUIRE(rows[i].optimal());
    CHECK(rows[i].dist_to_kls <= rows[i - 1].dist_to_kls + 1e-6);
  }
}

TEST_CASE("CSV output") {
  const auto dir = temp_dir("csv");
  CHECK_THROWS_AS(emit_csv({}, dir / "empty.csv"), std::invalid_argument);
  CHECK_FALSE(std::filesystem::exists(dir / "empty.csv"));

  auto rows = small_sweep();
  rows.resize(1);
  const std::string text = format_sweep_csv(rows, CsvOptions{true});
  std::istringstream in(text);
  std::string header, row, extra;
  std::getline(in, header);
  std::getline(in, row);
  const bool trailing = static_cast<bool>(std::getline(in, extra)) && !extra.empty();
  CHECK_FALSE(trailing);
  CHECK(header.rfind("case,lambda,status,k_11,k_12,acl_11", 0) == 0);
  CHECK(header.find("wall_time_s") != std::string::npos);
  CHECK(row.find("Optimal") != std::string::npos);
  CHECK(row.substr(row.rfind(',') + 1) == "0");
  emit_csv(rows, dir / "one.csv", CsvOptions{true});
  CHECK(std::filesystem::exists(dir / "one.csv"));
}

TEST_CASE("SVG output is well-formed XML") {
  const Matrix a = (Matrix(2, 2) << 0.5, 0.1, 0.0, 0.8).finished();
  std::vector<std::vector<Vector>> trajs;
  for (int i = 0; i < 3; ++i) {
    const Vector x0 = (Vector(2) << 5.0 * i - 5.0, 5.0).finished();
    std::vector<Vector> t{x0};
    for (const auto& x : simulate_closed_loop(a, x0, 20)) t.push_back(x);
    trajs.push_back(t);
  }
  pt::ptree tree;
  std::istringstream svg(format_svg_phase_portrait(a, trajs, "demo <title> & more"));
  REQUIRE_NOTHROW(pt::read_xml(svg, tree));
  CHECK(count_polylines(tree) == 3);
  CHECK_THROWS_AS(format_svg_phase_portrait(Matrix::Identity(3, 3), trajs), DimensionMismatch);

  const auto rows = small_sweep();
  pt::ptree sweep;
  std::istringstream s2(format_svg_sweep(rows, "dist_to_kls"));
  REQUIRE_NOTHROW(pt::read_xml(s2, sweep));
  CHECK(count_polylines(sweep) == 2);
  CHECK_THROWS_AS(format_svg_sweep(rows, "color"), std::invalid_argument);
}

TEST_CASE("solution JSON") {
  const auto cfg = test::plant_cfg();
  const LqrSolution s = model_lqr_sdp(cfg.plant());
  const auto j = nlohmann::json::parse(format_solution_json(s, SolutionMeta{RegWeights::gram(1, 2, 3), 1.0, true}));
  CHECK(j.at("program") == "model");
  CHECK(j.at("status") == "Optimal");
  CHECK(j.at("K").size() == 2);
  CHECK(j.at("P").size() == 4);
  CHECK(j.at("K")[0].get<double>() == s.K(0, 0));
  LqrSolution failed;
  failed.K = Matrix::Constant(1, 2, std::nan(""));
  failed.P = SymMatrix::zero(2);
  failed.A_cl = Matrix::Constant(2, 2, std::nan(""));
  const auto f = nlohmann::json::parse(format_solution_json(failed, {}));
  CHECK(f.at("K")[0].is_null());
}

TEST_CASE("scaling bench on a short ell list") {
  BenchOptions o;
  o.repeats = 1;
  const auto rows = bench_scaling({12, 18}, test::plant_cfg(), o);
  REQUIRE(rows.size() == 8);
  const ScalingVerdict v = check_scaling(rows);
  CHECK(v.all_optimal);
  CHECK(v.reduced_dims_invariant);
  for (const auto& r : rows) CHECK(r.min_s <= r.mean_s);
  CHECK(format_bench_csv(rows, true).find("0,0,0") != std::string::npos);
  CHECK_THROWS_AS(bench_scaling({}, test::plant_cfg(), o), std::invalid_argument);
}

}  // TEST_SUITE
