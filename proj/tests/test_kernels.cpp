#include <doctest.h>

#include <cmath>
#include <numeric>
#include <vector>

#include "ddlqr/kernels.hpp"
#include "support.hpp"

using namespace ddlqr::kernels;

TEST_SUITE("kernels") {

TEST_CASE("scalar is always available and listed first") {
  const auto isas = available_isas();
  REQUIRE_FALSE(isas.empty());
  CHECK(isas.front() == Isa::scalar);
  CHECK(table(Isa::scalar).isa == Isa::scalar);
  CHECK(std::find(isas.begin(), isas.end(), active().isa) != isas.end());
  for (Isa i : {Isa::avx2, Isa::neon}) {
    if (std::find(isas.begin(), isas.end(), i) == isas.end()) CHECK_THROWS_AS(table(i), std::invalid_argument);
  }
}

TEST_CASE("SIMD variants match the scalar reference") {
  ddlqr::test::Rng rng(901);
  const KernelTable& ref = table(Isa::scalar);
  for (Isa isa : available_isas()) {
    CAPTURE(to_string(isa));
    const KernelTable& k = table(isa);
    for (std::size_t n : {0u, 1u, 2u, 3u, 4u, 5u, 7u, 8u, 9u, 15u, 16u, 17u, 31u, 64u, 100u, 1023u}) {
      CAPTURE(n);
      std::vector<double> a(n), b(n), y(n);
      double mag = 0.0;
      for (std::size_t i = 0; i < n; ++i) {
        a[i] = rng.normal();
        b[i] = rng.normal();
        y[i] = rng.normal();
        mag += std::abs(a[i] * b[i]);
      }
      const double tol = 1e-14 * std::max(1.0, mag);
      CHECK(std::abs(k.dot(a.data(), b.data(), n) - ref.dot(a.data(), b.data(), n)) <= tol);

      std::vector<double> y1 = y, y2 = y;
      k.axpy(0.75, a.data(), y1.data(), n);
      ref.axpy(0.75, a.data(), y2.data(), n);
      for (std::size_t i = 0; i < n; ++i) CHECK(std::abs(y1[i] - y2[i]) <= 1e-15 * (1.0 + std::abs(y2[i])));

      std::vector<double> base(3 * n + 1);
      for (auto& v : base) v = rng.normal();
      std::vector<std::int32_t> idx(n);
      for (auto& v : idx) v = rng.integer(0, static_cast<int>(base.size()) - 1);
      CHECK(std::abs(k.gather_dot(a.data(), idx.data(), base.data(), n) -
                     ref.gather_dot(a.data(), idx.data(), base.data(), n)) <= 1e-13 * std::max(1.0, mag));
    }
  }
}

TEST_CASE("scalar kernels on exact inputs") {
  const KernelTable& k = table(Isa::scalar);
  const std::vector<double> a{1, 2, 3}, b{4, 5, 6};
  CHECK(k.dot(a.data(), b.data(), 3) == 32.0);
  std::vector<double> y{1, 1, 1};
  k.axpy(2.0, a.data(), y.data(), 3);
  CHECK(y == std::vector<double>{3, 5, 7});
  const std::vector<std::int32_t> idx{2, 0, 2};
  CHECK(k.gather_dot(a.data(), idx.data(), b.data(), 3) == 6.0 + 8.0 + 18.0);
}

}  // TEST_SUITE
