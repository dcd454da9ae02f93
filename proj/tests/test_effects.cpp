#include <doctest.h>

#include "ddlqr/effects.hpp"
#include "ddlqr/errors.hpp"
#include "ddlqr/harness/experiment.hpp"
#include "support.hpp"

using namespace ddlqr;
using ddlqr::test::Rng;

namespace {

struct Tuple {
  Matrix K, A;
  SymMatrix P;
};

Tuple random_tuple(Rng& rng) {
  return {rng.matrix(1, 2) * 3.0, rng.matrix(2, 2), rng.spd_spectrum(2, 1.0, 10.0)};
}

struct Fixture {
  Dataset d = harness::gen_paper_data(test::plant_cfg(42));
  DataStats st = compute_stats(d);
};

}  // namespace

TEST_SUITE("effects") {

TEST_CASE("RegWeights validation and labels") {
  CHECK(RegWeights::gram(1, 0, 2).case_label() == "{1,3}");
  CHECK(RegWeights::gram(0, 0, 0).case_label() == "{}");
  CHECK_THROWS_AS(RegWeights::gram(-1, 0, 0).validate(), std::invalid_argument);
  RegWeights w = RegWeights::covariance(1, 1);
  w.lambda1 = 1.0;
  CHECK_THROWS_AS(w.validate(), std::invalid_argument);
  CHECK_FALSE(RegWeights::covariance(1, 1).ell_scaling);
  CHECK(RegWeights::gram(1, 1, 1).ell_scaling);
}

TEST_CASE_FIXTURE(Fixture, "eval_reg_gram examples") {
  const SymMatrix eye = SymMatrix::identity(2);
  CHECK(eval_reg_gram(Matrix::Zero(30, 2), eye, 1.0, false, st) == 0.0);
  Rng rng(301);
  Matrix g = rng.matrix(30, 2);
  g /= g.norm();
  CHECK(eval_reg_gram(g, eye, 2.0, false, st) == doctest::Approx(2.0).epsilon(1e-14));
  // Columns in the row space of D0 are annihilated by the projector.
  const Matrix grow = st.D0_pinv * rng.matrix(3, 2);
  CHECK(eval_reg_gram(grow, rng.spd(2), 5.0, true, st) <= 1e-10);
}

TEST_CASE_FIXTURE(Fixture, "eval_reg_covar examples") {
  const SymMatrix eye = SymMatrix::identity(2);
  CHECK(eval_reg_covar(st.K_LS, eye, 0.0, st) == 0.0);
  const double expect = 3.0 * sym_inverse(st.sigma_X0, "sigma_X0").mat().trace();
  // At K = K_LS only the exploration term survives.
  CHECK(test::rel_diff(eval_reg_covar(st.K_LS, eye, 3.0, st), expect) <= 1e-9);
}

TEST_CASE_FIXTURE(Fixture, "closed form examples") {
  const Matrix acl = st.A_LS + st.B_LS * st.K_LS;
  const SymMatrix p = Rng(302).spd_spectrum(2, 1, 10);
  const EffectBreakdown e = param_effect_closed(st.K_LS, acl, p, st, RegWeights::gram(1, 1, 4));
  CHECK(e.h1 <= 1e-12);
  CHECK(e.h2 <= 1e-12);
  const double h3 = (sym_inverse(st.sigma_X0, "sigma_X0").mat() * p.mat()).trace();
  CHECK(test::rel_diff(e.total, 4.0 / 30.0 * h3) <= 1e-10);

  // sigma_X0 = I, P = I gives h3 = n.
  DataStats unit = st;
  unit.sigma_X0 = SymMatrix::identity(2);
  CHECK(param_effect_closed(st.K_LS, acl, SymMatrix::identity(2), unit, RegWeights::gram(0, 0, 1)).h3 ==
        doctest::Approx(2.0).epsilon(1e-14));
}

TEST_CASE_FIXTURE(Fixture, "singular covariances are named when their weight is positive") {
  const Dataset clean = harness::gen_paper_data(test::noiseless_cfg());
  const DataStats cs = compute_stats(clean);
  const SymMatrix p = SymMatrix::identity(2);
  const Matrix acl = cs.A_LS + cs.B_LS * cs.K_LS;
  try {
    param_effect_closed(cs.K_LS, acl, p, cs, RegWeights::gram(1, 0, 0));
    FAIL("expected NotPositiveDefinite");
  } catch (const NotPositiveDefinite& e) {
    CHECK(std::string(e.what()).find("sigma_dX") != std::string::npos);
  }
  // Zero weight: the singular term is reported as 0.
  CHECK(param_effect_closed(cs.K_LS, acl, p, cs, RegWeights::gram(0, 1, 1)).h1 == 0.0);
}

TEST_CASE("full Gram closed form equals the least-squares oracle") {
  Rng rng(303);
  for (int t = 0; t < 100; ++t) {
    const Dataset d = harness::gen_paper_data(test::plant_cfg(1000 + static_cast<std::uint64_t>(t % 10)));
    const DataStats st = compute_stats(d);
    REQUIRE(check_excitation(d).assumption1_holds);
    const Tuple tp = random_tuple(rng);
    const double lam = std::pow(10.0, rng.uniform(-2, 2));
    const EffectBreakdown e = param_effect_closed(tp.K, tp.A, tp.P, st, RegWeights::gram(lam, lam, lam));
    const OracleCertificate o = param_effect_oracle(tp.K, tp.A, tp.P, d, lam, OracleKind::full_gram);
    CHECK(o.constraint_residual <= 1e-8);
    CHECK(test::rel_diff(e.total, o.objective) <= 1e-8);
    CHECK(e.h1 >= 0.0);
    CHECK(e.h2 >= 0.0);
    CHECK(e.h3 >= 0.0);
  }
}

TEST_CASE("projected Gram closed form equals the KKT oracle") {
  Rng rng(304);
  for (int t = 0; t < 100; ++t) {
    const Dataset d = harness::gen_paper_data(test::plant_cfg(2000 + static_cast<std::uint64_t>(t % 10)));
    const DataStats st = compute_stats(d);
    const Tuple tp = random_tuple(rng);
    const double lam = std::pow(10.0, rng.uniform(-2, 2));
    const EffectBreakdown e = param_effect_closed(tp.K, tp.A, tp.P, st, RegWeights::gram(lam, 0, 0));
    const OracleCertificate o = param_effect_oracle(tp.K, tp.A, tp.P, d, lam, OracleKind::projected_gram);
    CHECK(o.constraint_residual <= 1e-8);
    CHECK(test::rel_diff(e.total, o.objective) <= 1e-8);
  }
}

TEST_CASE("covariance regularizer equals its closed form") {
  Rng rng(305);
  for (int t = 0; t < 100; ++t) {
    const Dataset d = harness::gen_paper_data(test::plant_cfg(3000 + static_cast<std::uint64_t>(t % 10)));
    const DataStats st = compute_stats(d);
    const Tuple tp = random_tuple(rng);
    const double lam = std::pow(10.0, rng.uniform(-2, 2));
    const double direct = eval_reg_covar(tp.K, tp.P, lam, st);
    const EffectBreakdown e = param_effect_closed(tp.K, tp.A, tp.P, st, RegWeights::covariance(lam, lam));
    CHECK(e.h1 == 0.0);
    CHECK(test::rel_diff(direct, e.total) <= 1e-9);
    const OracleCertificate o = param_effect_oracle(tp.K, tp.A, tp.P, d, lam, OracleKind::covariance);
    CHECK(test::rel_diff(o.objective, direct) <= 1e-12);
    CHECK(o.constraint_residual <= 1e-10);
  }
}

TEST_CASE("closed form holds for an arbitrary positive definite weight") {
  Rng rng(306);
  const Dataset d = harness::gen_paper_data(test::plant_cfg(7));
  const DataStats st = compute_stats(d);
  for (int t = 0; t < 30; ++t) {
    // Not a Lyapunov solution of anything: just a random SPD matrix.
    const SymMatrix s = rng.spd_spectrum(2, 0.01, 100.0);
    const Matrix k = rng.matrix(1, 2), a = rng.matrix(2, 2) * 5.0;
    const EffectBreakdown e = param_effect_closed(k, a, s, st, RegWeights::gram(1, 1, 1));
    const OracleCertificate o = param_effect_oracle(k, a, s, d, 1.0, OracleKind::full_gram);
    CHECK(test::rel_diff(e.total, o.objective) <= 1e-8);
  }
}

TEST_CASE("oracle minimizer also minimizes the unsquared norm") {
  Rng rng(307);
  for (int t = 0; t < 20; ++t) {
    const Dataset d = harness::gen_paper_data(test::plant_cfg(4000 + static_cast<std::uint64_t>(t)));
    const Tuple tp = random_tuple(rng);
    const OracleCertificate o = param_effect_oracle(tp.K, tp.A, tp.P, d, 1.0, OracleKind::full_gram);
    const Matrix kernel = null_space(d.D());
    for (int i = 0; i < 50; ++i) {
      // Feasible perturbations move within the kernel of D.
      const Matrix g = o.g_opt + kernel * rng.matrix(kernel.cols(), 2) * rng.uniform(1e-3, 1.0);
      CHECK((d.D() * g - d.D() * o.g_opt).norm() <= 1e-8 * std::max(1.0, (d.D() * o.g_opt).norm()));
      CHECK(std::sqrt(o.objective) <= g.norm() + 1e-12);
    }
  }
}

TEST_CASE("oracle rejects unreachable targets on noiseless data") {
  const Dataset d = harness::gen_paper_data(test::noiseless_cfg());
  const DataStats st = compute_stats(d);
  const Matrix k = st.K_LS;
  const Matrix acl = st.A_LS + st.B_LS * k + 0.1 * Matrix::Identity(2, 2);
  CHECK_THROWS_AS(param_effect_oracle(k, acl, SymMatrix::identity(2), d, 1.0, OracleKind::full_gram),
                  InfeasibleConstraint);
  CHECK_THROWS_AS(param_effect_oracle(k, acl, SymMatrix::identity(2), d, 1.0, OracleKind::projected_gram),
                  InfeasibleConstraint);
  // The certainty-equivalent closed loop is reachable.
  CHECK_NOTHROW(param_effect_oracle(k, st.A_LS + st.B_LS * k, SymMatrix::identity(2), d, 1.0, OracleKind::full_gram));
}

TEST_CASE_FIXTURE(Fixture, "effective_Q examples") {
  const SymMatrix q = SymMatrix::identity(2);
  CHECK(effective_Q(q, RegWeights::gram(1, 1, 0), 30, st).mat() == q.mat());
  DataStats unit = st;
  unit.sigma_X0 = SymMatrix::identity(2);
  CHECK((effective_Q(q, RegWeights::gram(0, 0, 30), 30, unit).mat() - 2.0 * Matrix::Identity(2, 2)).norm() < 1e-14);
  CHECK((effective_Q(q, RegWeights::covariance(0, 2), 30, unit).mat() - 3.0 * Matrix::Identity(2, 2)).norm() < 1e-14);
}

}  // TEST_SUITE
