#include <doctest.h>

#include <cmath>

#include "recal/gpme.hpp"

// Expected values evaluated independently in 30-digit arithmetic from the
// definitions R1 = ln pi(mu) - expansion, R2 = ln pi(l) - expansion at the
// +-1 sigma points of the respective expansions.
TEST_CASE("residuals match high-precision evaluation") {
  const auto r14 = recal::laplace_residuals(14);
  CHECK(r14.r1_plus == doctest::Approx(0.07435558538065334).epsilon(1e-12));
  CHECK(r14.r1_minus == doctest::Approx(-0.11186719553275964).epsilon(1e-12));
  const auto r3 = recal::laplace_residuals(3);
  CHECK(r3.r2_plus == doctest::Approx(-0.11188571476353).epsilon(1e-12));
  CHECK(r3.r2_minus == doctest::Approx(0.08379745103433826).epsilon(1e-12));
}

TEST_CASE("the l-space expansion beats the mu-space expansion at equal n") {
  for (long n : {2L, 3L, 5L, 10L, 14L, 40L, 100L}) {
    const auto r = recal::laplace_residuals(n);
    CHECK(std::abs(r.r2_plus) < std::abs(r.r1_plus));
    CHECK(std::abs(r.r2_minus) < std::abs(r.r1_minus));
  }
}

TEST_CASE("residual magnitudes fall monotonically with n") {
  double prev1p = 1e9, prev1m = 1e9, prev2p = 1e9, prev2m = 1e9;
  for (long n : {5L, 10L, 20L, 40L, 80L}) {
    const auto r = recal::laplace_residuals(n);
    CHECK(std::abs(r.r1_plus) < prev1p);
    CHECK(std::abs(r.r1_minus) < prev1m);
    CHECK(std::abs(r.r2_plus) < prev2p);
    CHECK(std::abs(r.r2_minus) < prev2m);
    prev1p = std::abs(r.r1_plus);
    prev1m = std::abs(r.r1_minus);
    prev2p = std::abs(r.r2_plus);
    prev2m = std::abs(r.r2_minus);
  }
}

TEST_CASE("n=1 keeps the l-space residuals finite") {
  const auto r = recal::laplace_residuals(1);
  CHECK(std::isfinite(r.r2_plus));
  CHECK(std::isfinite(r.r2_minus));
  CHECK(r.r2_plus != 0.0);
  CHECK(r.r2_minus != 0.0);
  CHECK(std::isfinite(r.r1_plus));
  CHECK(r.r1_plus != 0.0);
  // The mu-space -sigma point sits at mu = 0, where ln pi diverges.
  CHECK(std::isinf(r.r1_minus));
}

TEST_CASE("n must be positive") {
  CHECK_THROWS_AS(recal::laplace_residuals(0), recal::Error);
}
