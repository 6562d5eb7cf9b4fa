#include <doctest.h>

#include <Eigen/Eigenvalues>

#include <random>

#include "recal/gpme.hpp"
#include "recal/synth.hpp"
#include "test_util.hpp"

using testutil::uniform4000_model;

TEST_CASE("zero posterior variance kills EI and Var(dS); flat density kills dS_bar") {
  const auto m = testutil::unit_density_model();
  CHECK(recal::ei(m) == 0.0);
  CHECK(recal::var_delta_s(m) == 0.0);
  CHECK(recal::delta_s_bar(m) == 0.0);
  CHECK_FALSE(recal::fam(m).has_value());
}

TEST_CASE("EI tracks its B/2N asymptote at N=4096") {
  // Miscalibrated data keeps the kernel amplitude well above the bin noise,
  // the regime the asymptote assumes.
  const auto& m = testutil::gaussian_pair4096_model();
  const double scaled = recal::ei(m) * 2.0 * static_cast<double>(m.binned.total) /
                        static_cast<double>(m.binned.size());
  CHECK(scaled >= 0.5);
  CHECK(scaled <= 2.0);
}

TEST_CASE("doubling N at fixed bin count halves EI") {
  // Fixed B = 250 via target counts 8 and 16.
  const recal::GaussianPairScenario sc;
  const auto a1 = recal::gaussian_pair_foa(sc, 2000, 301);
  const auto a2 = recal::gaussian_pair_foa(sc, 4000, 302);
  const auto m1 = recal::fit_pit_model(recal::pit(a1), 8, 256);
  const auto m2 = recal::fit_pit_model(recal::pit(a2), 16, 256);
  REQUIRE(m1.binned.size() <= 250);
  REQUIRE(m2.binned.size() <= 250);
  const double b_ratio = static_cast<double>(m1.binned.size()) / m2.binned.size();
  const double ratio = recal::ei(m1) / recal::ei(m2) / b_ratio;
  CHECK(ratio >= 1.5);
  CHECK(ratio <= 2.8);
}

TEST_CASE("Var(dS) decays like 1/N on the gaussian-pair scenario") {
  const recal::GaussianPairScenario sc;
  double v1 = 0.0, v2 = 0.0;
  for (std::uint64_t s = 0; s < 3; ++s) {
    const auto a1 = recal::gaussian_pair_foa(sc, 1000, 400 + s);
    const auto a2 = recal::gaussian_pair_foa(sc, 2000, 500 + s);
    v1 += recal::var_delta_s(recal::fit_pit_model(recal::pit(a1), 8, 256));
    v2 += recal::var_delta_s(recal::fit_pit_model(recal::pit(a2), 16, 256));
  }
  const double ratio = v1 / v2;
  CHECK(ratio >= 1.4);
  CHECK(ratio <= 2.9);
}

TEST_CASE("dS_bar matches the analytic KL on the gaussian-pair scenario") {
  const recal::GaussianPairScenario sc;
  const auto archive = recal::gaussian_pair_foa(sc, 4096, 640);
  const auto m = recal::fit_pit_model(recal::pit(archive), 8, 512);
  const auto density = recal::gaussian_pair_pit_density(sc);
  // KL[pi_true || U] in bits by quadrature.
  const double kl = testutil::simpson(
      [&](double f) {
        const double p = density(f);
        return p > 0.0 ? p * recal::log2_of(p) : 0.0;
      },
      1e-9, 1.0 - 1e-9);
  CHECK(std::abs(recal::delta_s_bar(m) - kl) <= 0.05);
}

TEST_CASE("dS_bar is nonnegative across random fitted models") {
  std::mt19937_64 rng(71);
  for (int trial = 0; trial < 50; ++trial) {
    recal::GaussianPairScenario sc;
    std::uniform_real_distribution<double> uni(0.0, 1.0);
    sc.forecast_mean = -0.5 + uni(rng);
    sc.forecast_sd = 0.7 + uni(rng);
    const auto archive = recal::gaussian_pair_foa(sc, 300, 800 + trial);
    const auto m = recal::fit_pit_model(recal::pit(archive), 8, 128);
    CHECK(recal::delta_s_bar(m) >= 0.0);
    CHECK(recal::ei(m) >= 0.0);
    CHECK(recal::var_delta_s(m) >= 0.0);
  }
}

TEST_CASE("delta_s_true reduces to dS_bar under substitution") {
  const auto& m = uniform4000_model();
  const auto self = [&](double f) { return recal::predictive_density(m, f); };
  CHECK(recal::delta_s_true(m, self) ==
        doctest::Approx(recal::delta_s_bar(m)).epsilon(1e-10));
}

TEST_CASE("delta_s_true against a calibrated truth is nonpositive") {
  const auto& m = uniform4000_model();
  const auto unit = [](double) { return 1.0; };
  CHECK(recal::delta_s_true(m, unit) <= 1e-12);
}

TEST_CASE("Var(dS) integrand is symmetric under transposition") {
  const auto& m = uniform4000_model();
  recal::GpmeModel t = m;
  t.cov = m.cov.transpose();
  CHECK(recal::var_delta_s(t) == doctest::Approx(recal::var_delta_s(m)).epsilon(1e-12));
}

TEST_CASE("fam is the gain-to-uncertainty ratio") {
  const auto& m = uniform4000_model();
  const double v = recal::var_delta_s(m);
  const auto f = recal::fam(m);
  if (v > 0.0) {
    REQUIRE(f.has_value());
    CHECK(*f == doctest::Approx(recal::delta_s_bar(m) / std::sqrt(v)));
  }
}

TEST_CASE("posterior mass fluctuation matches Var{J} ~ N") {
  const auto& m = testutil::gaussian_pair4096_model();
  REQUIRE(m.has_cov());
  const int gs = m.grid_size();
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(m.cov);
  Eigen::VectorXd sqrt_ev = es.eigenvalues().cwiseMax(0.0).cwiseSqrt();

  std::mt19937_64 rng(914);
  std::normal_distribution<double> unit(0.0, 1.0);
  const int samples = 2000;
  std::vector<double> js(samples);
  Eigen::VectorXd z(gs), l(gs);
  std::vector<double> expl(gs);
  for (int s = 0; s < samples; ++s) {
    for (int i = 0; i < gs; ++i) z(i) = unit(rng) * sqrt_ev(i);
    l = es.eigenvectors() * z;
    for (int i = 0; i < gs; ++i) expl[i] = std::exp(m.mean_log[i] + l(i));
    js[s] = recal::trapezoid(expl, 1.0 / (gs - 1));
  }
  double mean = 0.0;
  for (double j : js) mean += j;
  mean /= samples;
  double var = 0.0;
  for (double j : js) var += (j - mean) * (j - mean);
  var /= (samples - 1);
  const double scaled = var / static_cast<double>(m.binned.total);
  CHECK(scaled >= 0.3);
  CHECK(scaled <= 3.0);
}
