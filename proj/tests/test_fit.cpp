#include <doctest.h>

#include "recal/gpme.hpp"
#include "test_util.hpp"

TEST_CASE("identical inputs give identical hyperparameters") {
  const auto series = testutil::uniform_pit(400, 77);
  const auto b = recal::bin_pit(series, 8);
  const auto fit1 = recal::fit_hyperparams(b);
  const auto fit2 = recal::fit_hyperparams(b);
  CHECK(fit1.theta.amplitude == fit2.theta.amplitude);      // bitwise
  CHECK(fit1.theta.length_scale == fit2.theta.length_scale);
  CHECK(fit1.objective == fit2.objective);
  CHECK(fit1.l0 == fit2.l0);
}

TEST_CASE("parallel and serial searches agree") {
  const auto series = testutil::uniform_pit(400, 78);
  const auto b = recal::bin_pit(series, 8);
  recal::SearchConfig serial;
  serial.parallel = false;
  const auto fit1 = recal::fit_hyperparams(b, serial);
  const auto fit2 = recal::fit_hyperparams(b);
  CHECK(fit1.theta.amplitude == fit2.theta.amplitude);
  CHECK(fit1.theta.length_scale == fit2.theta.length_scale);
}

TEST_CASE("box constraints hold") {
  const auto& m = testutil::uniform4000_model();
  CHECK(m.theta.length_scale >= 0.01 - 1e-12);
  CHECK(m.theta.length_scale <= 10.0 + 1e-12);
  CHECK(m.theta.amplitude >= 1e-4 - 1e-16);
  CHECK(m.theta.amplitude <= 1e4 + 1e-8);
}

TEST_CASE("every start is recorded") {
  const auto series = testutil::uniform_pit(400, 79);
  const auto b = recal::bin_pit(series, 8);
  const auto fit = recal::fit_hyperparams(b);
  CHECK(fit.starts.size() == 16);
  double best = 1e300;
  for (const auto& s : fit.starts) best = std::min(best, s.objective);
  CHECK(fit.objective == best);
  CHECK(fit.converged);
}
