#include <doctest.h>

#include "ddlqr/errors.hpp"
#include "ddlqr/matlin.hpp"
#include "support.hpp"

using namespace ddlqr;
using ddlqr::test::Rng;

namespace {

const Matrix kPlantA = (Matrix(2, 2) << 0.525, -0.325, -0.325, 0.525).finished();
const Matrix kPlantB = (Matrix(2, 1) << 1.0, 0.0).finished();

Matrix diag(std::initializer_list<double> d) {
  Vector v(static_cast<Eigen::Index>(d.size()));
  Eigen::Index i = 0;
  for (double x : d) v(i++) = x;
  return v.asDiagonal();
}

}  // namespace

TEST_SUITE("matlin") {

TEST_CASE("SymMatrix rejects asymmetric input and stores exact symmetry") {
  Matrix m(2, 2);
  m << 1.0, 2.0, 2.0 + 1e-12, 3.0;
  const SymMatrix s(m);
  CHECK(s(0, 1) == s(1, 0));
  m(1, 0) = 2.5;
  CHECK_THROWS_AS(SymMatrix{m}, AsymmetricInput);
}

TEST_CASE("cholesky examples and reconstruction") {
  CHECK(cholesky(SymMatrix::identity(2)).isApprox(Matrix::Identity(2, 2)));
  CHECK((cholesky(SymMatrix(diag({4, 9}))) - diag({2, 3})).norm() < 1e-15);
  CHECK_THROWS_AS(cholesky(SymMatrix(diag({1, 0}))), NotPositiveDefinite);
  CHECK_THROWS_AS(cholesky(SymMatrix(diag({1, -1}))), NotPositiveDefinite);

  Rng rng(101);
  for (int t = 0; t < 100; ++t) {
    const SymMatrix s = rng.spd(1 + t % 10);
    const Matrix l = cholesky(s);
    CHECK(l.isLowerTriangular());
    CHECK((l * l.transpose() - s.mat()).norm() / s.mat().norm() <= 1e-12);
  }
}

TEST_CASE("sym_sqrt examples, reconstruction and projector idempotence") {
  CHECK(sym_sqrt(SymMatrix::identity(3)).mat().isApprox(Matrix::Identity(3, 3)));
  CHECK((sym_sqrt(SymMatrix(diag({4, 9}))).mat() - diag({2, 3})).norm() < 1e-14);
  CHECK_THROWS_AS(sym_sqrt(SymMatrix(diag({1, -1e-3}))), IndefiniteInput);
  // Tiny negative eigenvalues are clamped.
  CHECK(sym_sqrt(SymMatrix(diag({1, -1e-14}))).mat()(1, 1) == 0.0);

  Rng rng(102);
  for (int t = 0; t < 50; ++t) {
    const SymMatrix s = rng.spd(1 + t % 8);
    const Matrix r = sym_sqrt(s).mat();
    CHECK((r * r - s.mat()).norm() / s.mat().norm() <= 1e-10);
    CHECK(SymMatrix(r).min_eigenvalue() >= 0.0);
  }
  for (int t = 0; t < 20; ++t) {
    const Eigen::Index n = 2 + t % 6, k = 1 + t % (n - 1);
    const Matrix q = Eigen::HouseholderQR<Matrix>(rng.matrix(n, k)).householderQ() * Matrix::Identity(n, k);
    const SymMatrix proj(Matrix(q * q.transpose()));
    // Zero eigenvalues carry rounding noise of order eps, whose root is ~1e-8.
    CHECK((sym_sqrt(proj).mat() - proj.mat()).norm() <= 1e-7);
  }
}

TEST_CASE("inverse square root and inverse name the singular input") {
  const SymMatrix s(diag({4, 16}));
  CHECK((inv_sym_sqrt(s, "S").mat() - diag({0.5, 0.25})).norm() < 1e-14);
  CHECK((sym_inverse(s, "S").mat() - diag({0.25, 0.0625})).norm() < 1e-14);
  try {
    sym_inverse(SymMatrix(diag({1, 0})), "sigma_dX");
    FAIL("expected NotPositiveDefinite");
  } catch (const NotPositiveDefinite& e) {
    CHECK(std::string(e.what()).find("sigma_dX") != std::string::npos);
  }
}

TEST_CASE("pinv examples and Penrose identities") {
  CHECK(pinv(Matrix::Identity(2, 2)).isApprox(Matrix::Identity(2, 2)));
  const Matrix z = pinv(Matrix::Zero(2, 3));
  CHECK(z.rows() == 3);
  CHECK(z.cols() == 2);
  CHECK(z.norm() == 0.0);

  Rng rng(103);
  const Matrix d = rng.matrix(3, 30);
  CHECK((d * pinv(d) - Matrix::Identity(3, 3)).norm() <= 1e-10);

  for (int t = 0; t < 100; ++t) {
    const Eigen::Index r = rng.integer(1, 8), c = rng.integer(1, 8);
    const Eigen::Index rank = t % 3 == 0 ? std::max<Eigen::Index>(1, std::min(r, c) - 1) : std::min(r, c);
    const Matrix m = rng.low_rank(r, c, rank);
    const Matrix p = pinv(m);
    const double s = std::max(1.0, m.norm());
    CHECK(numerical_rank(m) == rank);
    CHECK((m * p * m - m).norm() <= 1e-10 * s);
    CHECK((p * m * p - p).norm() <= 1e-10 * std::max(1.0, p.norm()));
    CHECK(((m * p).transpose() - m * p).norm() <= 1e-10 * s);
    CHECK(((p * m).transpose() - p * m).norm() <= 1e-10 * s);
  }
}

TEST_CASE("null_space is an orthonormal kernel basis") {
  Rng rng(104);
  for (int t = 0; t < 20; ++t) {
    const Matrix m = rng.low_rank(3, 10, 2 + t % 2);
    const Matrix n = null_space(m);
    CHECK(n.cols() == 10 - numerical_rank(m));
    CHECK((m * n).norm() <= 1e-10 * m.norm());
    CHECK((n.transpose() * n - Matrix::Identity(n.cols(), n.cols())).norm() <= 1e-10);
  }
}

TEST_CASE("solve_dlyap examples") {
  CHECK((solve_dlyap(Matrix::Zero(2, 2)).mat() - Matrix::Identity(2, 2)).norm() < 1e-14);
  CHECK((solve_dlyap(0.5 * Matrix::Identity(2, 2)).mat() - (4.0 / 3.0) * Matrix::Identity(2, 2)).norm() < 1e-13);
  CHECK_THROWS_AS(solve_dlyap(Matrix::Identity(2, 2)), UnstableMatrix);
  const Matrix rot = (Matrix(2, 2) << 0.0, -1.0, 1.0, 0.0).finished();
  CHECK_THROWS_AS(solve_dlyap(rot), UnstableMatrix);
}

TEST_CASE("solve_dlyap residual and P >= I on random stable matrices") {
  Rng rng(105);
  for (int t = 0; t < 100; ++t) {
    const Eigen::Index n = 1 + t % 6;
    Matrix a = rng.matrix(n, n);
    a *= rng.uniform(0.05, 0.98) / spectral_radius(a);
    const SymMatrix p = solve_dlyap(a);
    CHECK(dlyap_residual(a, p) <= 1e-9 * std::max(1.0, p.mat().norm()));
    CHECK(p.min_eigenvalue() >= 1.0 - 1e-8);
  }
}

TEST_CASE("solve_dare examples") {
  const Matrix e1 = (Matrix(2, 1) << 1.0, 0.0).finished();
  CHECK(solve_dare(Matrix::Zero(2, 2), e1, SymMatrix::identity(2), SymMatrix::identity(1)).K.norm() < 1e-14);
  CHECK(solve_dare(0.5 * Matrix::Identity(2, 2), Matrix::Zero(2, 1), SymMatrix::identity(2), SymMatrix::identity(1))
            .K.norm() < 1e-14);

  const SymMatrix q = SymMatrix::identity(2), r(Matrix::Constant(1, 1, 0.1));
  const DareSolution sol = solve_dare(kPlantA, kPlantB, q, r);
  CHECK(spectral_radius(kPlantA + kPlantB * sol.K) < 1.0);
  CHECK(dare_residual(kPlantA, kPlantB, q, r, sol.S) <= 1e-9);
  // The H2 cost of the Riccati gain equals tr(S) for unit-covariance noise.
  CHECK(std::abs(h2norm_sq(kPlantA + kPlantB * sol.K, sol.K, q, r) - sol.S.mat().trace()) <= 1e-9);
}

TEST_CASE("solve_dare fails on a non-stabilizable pair") {
  const Matrix a = (Matrix(2, 2) << 1.2, 0.0, 0.0, 0.5).finished();
  const Matrix b = (Matrix(2, 1) << 0.0, 1.0).finished();
  CHECK_THROWS_AS(solve_dare(a, b, SymMatrix::identity(2), SymMatrix::identity(1)), NoConvergence);
}

TEST_CASE("solve_dare residual and stability on random stabilizable systems") {
  Rng rng(106);
  for (int t = 0; t < 30; ++t) {
    const Eigen::Index n = 2 + t % 3, m = 1 + t % 2;
    const Matrix a = rng.matrix(n, n) * 0.7;
    const Matrix b = rng.matrix(n, m);
    const SymMatrix q = rng.spd(n), r = rng.spd(m);
    const DareSolution sol = solve_dare(a, b, q, r);
    CHECK(spectral_radius(a + b * sol.K) < 1.0);
    CHECK(dare_residual(a, b, q, r, sol.S) <= 1e-9);
  }
}

TEST_CASE("h2norm_sq examples") {
  const SymMatrix q = SymMatrix::identity(2), r(Matrix::Constant(1, 1, 0.1));
  CHECK(h2norm_sq(Matrix::Zero(2, 2), Matrix::Zero(1, 2), q, r) == doctest::Approx(2.0).epsilon(1e-14));
  CHECK(h2norm_sq(0.5 * Matrix::Identity(2, 2), Matrix::Zero(1, 2), q, r) == doctest::Approx(8.0 / 3.0).epsilon(1e-13));
  CHECK_THROWS_AS(h2norm_sq(Matrix::Identity(2, 2), Matrix::Zero(1, 2), q, r), UnstableMatrix);
}

}  // TEST_SUITE
