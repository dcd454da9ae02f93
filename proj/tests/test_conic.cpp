#include <doctest.h>

#include <sstream>

#include "ddlqr/conic/solver.hpp"
#include "ddlqr/errors.hpp"
#include "support.hpp"

using namespace ddlqr;
using namespace ddlqr::conic;
using ddlqr::test::Rng;

namespace {

Matrix m11(double v) { return Matrix::Constant(1, 1, v); }

double min_eig(const LmiProblem& p, const Vector& y) {
  double lmin = 1e300;
  for (std::size_t b = 0; b < p.blocks().size(); ++b) {
    const Matrix s = p.block_value(b, y);
    lmin = std::min(lmin, Eigen::SelfAdjointEigenSolver<Matrix>(s, Eigen::EigenvaluesOnly).eigenvalues()(0));
  }
  return lmin;
}

Matrix random_sym(Rng& rng, Eigen::Index d) {
  const Matrix a = rng.matrix(d, d);
  return 0.5 * (a + a.transpose());
}

// Strictly feasible at y = 0 (F0 > 0) and bounded (c = A*(Z0) for some Z0 > 0).
LmiProblem random_lmi(Rng& rng) {
  const int k = rng.integer(1, 10);
  LmiProblem p(k);
  Vector c = Vector::Zero(k);
  const int nb = rng.integer(1, 3);
  for (int b = 0; b < nb; ++b) {
    const Eigen::Index d = rng.integer(1, 8);
    std::vector<Matrix> f;
    f.push_back(rng.spd(d).mat());
    for (int i = 0; i < k; ++i) f.push_back(random_sym(rng, d));
    const Matrix z0 = rng.spd(d).mat();
    for (int i = 0; i < k; ++i) c(i) += (f[static_cast<std::size_t>(i) + 1].cwiseProduct(z0)).sum();
    p.add_block(f);
  }
  p.set_objective(c);
  return p;
}

// Largest t in [0, tmax] keeping y + t d feasible, by bisection on the
// smallest block eigenvalue.
double feasible_extent(const LmiProblem& p, const Vector& y, const Vector& d, double tmax) {
  if (min_eig(p, y + tmax * d) >= 0.0) return tmax;
  double lo = 0.0, hi = tmax;
  for (int i = 0; i < 60; ++i) {
    const double mid = 0.5 * (lo + hi);
    (min_eig(p, y + mid * d) >= 0.0 ? lo : hi) = mid;
  }
  return lo;
}

}  // namespace

TEST_SUITE("conic") {

TEST_CASE("minimize y subject to y >= 0") {
  LmiProblem p(1);
  p.add_block({m11(0.0), m11(1.0)});
  p.set_objective(Vector::Ones(1));
  const ConicSolution s = solve(p);
  REQUIRE(s.optimal());
  CHECK(std::abs(s.y(0)) <= 1e-8);
  CHECK(s.gap >= 0.0);
}

TEST_CASE("determinant boundary: maximize y with [[1, y], [y, 1]] >= 0") {
  LmiProblem p(1);
  Matrix f1 = Matrix::Zero(2, 2);
  f1(0, 1) = f1(1, 0) = 1.0;
  p.add_block({Matrix::Identity(2, 2), f1});
  p.set_objective(-Vector::Ones(1));
  const ConicSolution s = solve(p);
  REQUIRE(s.optimal());
  CHECK(s.y(0) == doctest::Approx(1.0).epsilon(1e-7));
  CHECK(s.objective == doctest::Approx(-1.0).epsilon(1e-8));
}

TEST_CASE("affine builder round trip on the determinant example") {
  LmiProblem p(1);
  AffineMatrix y(1, 1);
  y.add_term(0, 0, 0, 1.0);
  p.add_block(sym_block(AffineMatrix(m11(1.0)), y, AffineMatrix(m11(1.0))));
  p.add_objective(-1.0 * Matrix::Identity(1, 1), y);
  const ConicSolution s = solve(p);
  REQUIRE(s.optimal());
  CHECK(s.objective == doctest::Approx(-1.0).epsilon(1e-8));
}

TEST_CASE("builder errors") {
  LmiProblem p(1);
  Matrix f1 = Matrix::Zero(2, 2);
  f1(0, 1) = 1.0;
  CHECK_THROWS_AS(p.add_block({Matrix::Identity(2, 2), f1}), AsymmetricInput);
  CHECK_THROWS_AS(p.add_block(std::vector<Matrix>{Matrix::Identity(2, 2)}), DimensionMismatch);
  CHECK_THROWS_AS(p.add_block({Matrix::Identity(2, 2), Matrix::Zero(3, 3)}), DimensionMismatch);
  CHECK_THROWS_AS(p.set_objective(Vector::Zero(3)), DimensionMismatch);
  SolverSettings bad;
  bad.tol_gap = 0.0;
  CHECK_THROWS_AS(solve(p, bad), std::invalid_argument);
}

TEST_CASE("empty problems") {
  LmiProblem zero(2);
  const ConicSolution a = solve(zero);
  CHECK(a.status == SolveStatus::Optimal);
  CHECK(a.objective == 0.0);
  LmiProblem lin(2);
  lin.set_objective(Vector::Ones(2));
  CHECK(solve(lin).status == SolveStatus::Unbounded);
}

TEST_CASE("infeasible and unbounded programs are reported by status") {
  // y >= 1 and -y >= 0.
  LmiProblem inf(1);
  inf.add_block({m11(-1.0), m11(1.0)});
  inf.add_block({m11(0.0), m11(-1.0)});
  inf.set_objective(Vector::Ones(1));
  CHECK(solve(inf).status == SolveStatus::Infeasible);
  // minimize -y subject to y >= 0.
  LmiProblem unb(1);
  unb.add_block({m11(0.0), m11(1.0)});
  unb.set_objective(-Vector::Ones(1));
  CHECK(solve(unb).status == SolveStatus::Unbounded);
}

TEST_CASE("svec packing preserves inner products") {
  Rng rng(401);
  const Eigen::Index n = 4;
  Vector y = rng.matrix(svec_size(n), 1);
  const Matrix s = smat(y, 0, n);
  CHECK((s - s.transpose()).norm() == 0.0);
  CHECK(s.squaredNorm() == doctest::Approx(y.squaredNorm()).epsilon(1e-14));
  CHECK((sym_var(0, n).value(y) - s).norm() <= 1e-15);
  const Vector z = rng.matrix(6, 1);
  CHECK((full_var(0, 2, 3).value(z) - read_full(z, 0, 2, 3)).norm() == 0.0);
}

TEST_CASE("dump and read back") {
  Rng rng(402);
  const LmiProblem p = random_lmi(rng);
  std::stringstream ss;
  p.dump(ss);
  const LmiProblem q = LmiProblem::read_dump(ss);
  CHECK(q.num_vars() == p.num_vars());
  CHECK(q.block_dims() == p.block_dims());
  CHECK((q.objective() - p.objective()).norm() == 0.0);
  const Vector y = rng.matrix(p.num_vars(), 1);
  for (std::size_t b = 0; b < p.blocks().size(); ++b) CHECK((q.block_value(b, y) - p.block_value(b, y)).norm() <= 1e-12);
}

TEST_CASE("seeded random LMIs: eigenvalue certificate and 1-D optimality") {
  Rng rng(403);
  for (int t = 0; t < 20; ++t) {
    CAPTURE(t);
    const LmiProblem p = random_lmi(rng);
    const ConicSolution s = solve(p);
    REQUIRE(s.optimal());
    const SolverSettings def;
    double f0 = 0.0;
    for (const auto& b : p.blocks()) f0 = std::max(f0, b.f0.norm());
    CHECK(min_eig(p, s.y) >= -1e-6);
    CHECK(min_eig(p, s.y) >= -def.tol_feas * (1.0 + f0) * 100.0);
    CHECK(s.gap >= 0.0);
    CHECK(s.gap <= 100.0 * def.tol_gap * (1.0 + std::abs(s.objective)));
    // Dual objective from the returned Z agrees with the primal one.
    double dobj = 0.0;
    for (std::size_t b = 0; b < p.blocks().size(); ++b) dobj -= (p.blocks()[b].f0.cwiseProduct(s.dual[b])).sum();
    CHECK(test::rel_diff(dobj, s.objective) <= 1e-7);
    // Along random lines through the optimum no feasible point does better.
    for (int i = 0; i < 10; ++i) {
      Vector d = rng.matrix(p.num_vars(), 1);
      d /= d.norm();
      for (double sign : {1.0, -1.0}) {
        const double tm = feasible_extent(p, s.y, sign * d, 10.0);
        const double move = p.objective().dot(sign * d) * tm;
        CHECK(move >= -1e-6 * (1.0 + std::abs(s.objective)));
      }
    }
  }
}

TEST_CASE("determinism and scale robustness") {
  Rng rng(404);
  for (int t = 0; t < 10; ++t) {
    LmiProblem p = random_lmi(rng);
    const ConicSolution a = solve(p), b = solve(p);
    REQUIRE(a.optimal());
    CHECK(a.iters == b.iters);
    CHECK(a.objective == b.objective);
    CHECK(a.y == b.y);
    p.set_objective(10.0 * p.objective());
    const ConicSolution c = solve(p);
    REQUIRE(c.optimal());
    // Optimal faces need not be points, so only the value is compared.
    CHECK(test::rel_diff(c.objective, 10.0 * a.objective) <= 1e-7);
    CHECK(min_eig(p, c.y) >= -1e-6);
  }
}

// min tr(W) + tr(P)  s.t.  [[W, Y], [Y', P]] >= 0, P >= I with constant Y.
// W = Y P^{-1} Y' at the optimum, so the value is sum_i min_{p >= 1} s_i/p + p
// over the eigenvalues s_i of Y'Y: 2 sqrt(s_i) if s_i >= 1, else s_i + 1.
TEST_CASE("large slack block is eliminated exactly") {
  Rng rng(405);
  for (const Eigen::Index ell : {7, 8, 20}) {
    CAPTURE(ell);
    const Eigen::Index n = 2;
    const Matrix y = rng.matrix(ell, n) * 0.7;
    for (const bool redundant : {false, true}) {
      LmiProblem p(static_cast<int>(svec_size(ell) + svec_size(n)));
      const AffineMatrix w = sym_var(0, ell), pp = sym_var(static_cast<int>(svec_size(ell)), n);
      p.add_block(sym_block(w, AffineMatrix(y), pp));
      p.add_block(pp - AffineMatrix(Matrix(Matrix::Identity(n, n))));
      // An inactive extra constraint on W(0,0) disables the elimination
      // path and must not change the answer.
      if (redundant) {
        AffineMatrix w00(1, 1);
        w00.add_term(0, 0, 0, 1.0);
        p.add_block(w00 + AffineMatrix(m11(1.0)));
      }
      p.add_objective(Matrix::Identity(ell, ell), w);
      p.add_objective(Matrix::Identity(n, n), pp);
      const ConicSolution s = solve(p);
      REQUIRE(s.optimal());
      const Vector sv = Eigen::SelfAdjointEigenSolver<Matrix>(y.transpose() * y).eigenvalues();
      double expect = 0.0;
      for (Eigen::Index i = 0; i < n; ++i) expect += sv(i) >= 1.0 ? 2.0 * std::sqrt(sv(i)) : sv(i) + 1.0;
      CHECK(test::rel_diff(s.objective, expect) <= 1e-8);
      CHECK(min_eig(p, s.y) >= -1e-8);
    }
  }
}

}  // TEST_SUITE
