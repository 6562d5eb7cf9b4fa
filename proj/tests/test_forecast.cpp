#include <doctest.h>

#include <random>

#include "recal/forecast.hpp"
#include "recal/math.hpp"
#include "test_util.hpp"

using recal::ForecastDistribution;

TEST_CASE("standard normal cdf at the mean is one half") {
  const auto d = ForecastDistribution::normal(0.0, 1.0);
  CHECK(d.cdf(0.0) == doctest::Approx(0.5).epsilon(1e-14));
}

TEST_CASE("grid cdf interpolates linearly") {
  const auto d = ForecastDistribution::grid_cdf({0.0, 1.0}, {0.0, 1.0});
  CHECK(d.cdf(0.25) == doctest::Approx(0.25).epsilon(1e-14));
  CHECK(d.pdf(0.5) == doctest::Approx(1.0));
  CHECK(d.cdf(-1.0) == 0.0);
  CHECK(d.cdf(2.0) == 1.0);
  CHECK(d.pdf(2.0) == 0.0);
}

TEST_CASE("symmetric mixture cdf at the symmetry point") {
  const auto d = ForecastDistribution::gaussian_mixture({0.5, 0.5}, {-1.0, 1.0}, {1.0, 1.0});
  CHECK(d.cdf(0.0) == doctest::Approx(0.5).epsilon(1e-14));
}

TEST_CASE("quantile inverts cdf for random mixtures") {
  std::mt19937_64 rng(42);
  std::uniform_real_distribution<double> uni(0.0, 1.0);
  for (int trial = 0; trial < 25; ++trial) {
    const int k = 1 + static_cast<int>(uni(rng) * 4);
    std::vector<double> w(k), mu(k), sd(k);
    for (int i = 0; i < k; ++i) {
      w[i] = 0.1 + uni(rng);
      mu[i] = -3.0 + 6.0 * uni(rng);
      sd[i] = 0.2 + 2.0 * uni(rng);
    }
    const auto d = ForecastDistribution::gaussian_mixture(w, mu, sd);
    for (double q : {0.01, 0.2, 0.5, 0.8, 0.99}) {
      const double x = d.quantile(q);
      CHECK(d.cdf(x) == doctest::Approx(q).epsilon(1e-8));
    }
    // quantile(cdf(x)) recovers x in the bulk
    const double x0 = mu[0] + 0.7 * sd[0];
    CHECK(d.quantile(d.cdf(x0)) == doctest::Approx(x0).epsilon(1e-8));
  }
}

TEST_CASE("pdf integrates to one over the effective support") {
  const auto mix = ForecastDistribution::gaussian_mixture({0.3, 0.7}, {-2.0, 1.5}, {0.5, 2.0});
  const double lo = mix.quantile(1e-9), hi = mix.quantile(1.0 - 1e-9);
  const double mass = testutil::simpson([&](double x) { return mix.pdf(x); }, lo, hi);
  CHECK(mass >= 1.0 - 1e-6);
  CHECK(mass <= 1.0 + 1e-9);

  const auto grid = ForecastDistribution::grid_cdf({0.0, 0.2, 0.7, 1.0},
                                                   {0.0, 0.35, 0.8, 1.0});
  const double glo = grid.quantile(1e-9), ghi = grid.quantile(1.0 - 1e-9);
  CHECK(grid.cdf(ghi) - grid.cdf(glo) >= 1.0 - 1e-6);
}

TEST_CASE("grid quantile inverts exactly between knots") {
  const auto d = ForecastDistribution::grid_cdf({-1.0, 0.0, 2.0}, {0.0, 0.25, 1.0});
  CHECK(d.quantile(0.25) == doctest::Approx(0.0).epsilon(1e-14));
  CHECK(d.quantile(0.625) == doctest::Approx(1.0).epsilon(1e-14));
  for (double q : {0.05, 0.3, 0.9}) {
    CHECK(d.cdf(d.quantile(q)) == doctest::Approx(q).epsilon(1e-12));
  }
}

TEST_CASE("invalid constructions are rejected") {
  CHECK_THROWS_AS(ForecastDistribution::gaussian_mixture({1.0}, {0.0}, {0.0}),
                  recal::Error);
  CHECK_THROWS_AS(ForecastDistribution::gaussian_mixture({1.0, 1.0}, {0.0}, {1.0}),
                  recal::Error);
  CHECK_THROWS_AS(ForecastDistribution::gaussian_mixture({-1.0, 2.0}, {0.0, 1.0}, {1.0, 1.0}),
                  recal::Error);
  CHECK_THROWS_AS(ForecastDistribution::grid_cdf({0.0, 1.0}, {0.1, 1.0}), recal::Error);
  CHECK_THROWS_AS(ForecastDistribution::grid_cdf({1.0, 0.0}, {0.0, 1.0}), recal::Error);
  CHECK_THROWS_AS(ForecastDistribution::grid_cdf({0.0, 1.0}, {0.0, 0.9}), recal::Error);
  const auto d = ForecastDistribution::normal(0.0, 1.0);
  CHECK_THROWS_AS(d.quantile(0.0), recal::Error);
  CHECK_THROWS_AS(d.quantile(1.0), recal::Error);
}

TEST_CASE("mixture weights are normalised") {
  const auto d = ForecastDistribution::gaussian_mixture({2.0, 2.0}, {0.0, 0.0}, {1.0, 1.0});
  CHECK(d.mixture().weights[0] == doctest::Approx(0.5));
  const double mass = testutil::simpson([&](double x) { return d.pdf(x); }, -9.0, 9.0);
  CHECK(mass == doctest::Approx(1.0).epsilon(1e-10));
}
