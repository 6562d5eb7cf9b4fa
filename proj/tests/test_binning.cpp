#include <doctest.h>

#include <numeric>

#include "recal/binning.hpp"
#include "test_util.hpp"

TEST_CASE("evenly spread series fills every bin exactly") {
  std::vector<double> v(100);
  std::vector<std::int64_t> t(100);
  for (int k = 0; k < 100; ++k) {
    v[k] = (k + 0.5) / 100.0;
    t[k] = k;
  }
  const auto b = recal::bin_pit(recal::PitSeries(std::move(v), std::move(t)), 10);
  REQUIRE(b.size() == 10);
  for (int c : b.counts) CHECK(c == 10);
  CHECK(b.total == 100);
}

TEST_CASE("N=566 at target 8 gives 70 equal-width populated bins") {
  const auto series = testutil::uniform_pit(566, 123);
  const auto b = recal::bin_pit(series, 8);
  CHECK(b.size() == 70);
  for (int c : b.counts) CHECK(c >= 1);
  const double wsum = std::accumulate(b.widths.begin(), b.widths.end(), 0.0);
  CHECK(wsum == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(std::accumulate(b.counts.begin(), b.counts.end(), 0L) == 566);
}

TEST_CASE("bin count shrinks until every bin is populated") {
  // Bimodal mass at 0.1 and 0.9: every B > 2 leaves a middle bin empty.
  std::vector<double> v;
  std::vector<std::int64_t> t;
  for (int k = 0; k < 200; ++k) {
    v.push_back(k % 2 ? 0.1 : 0.9);
    t.push_back(k);
  }
  const auto b = recal::bin_pit(recal::PitSeries(std::move(v), std::move(t)), 8);
  CHECK(b.size() == 2);
  CHECK(b.counts[0] == 100);
  CHECK(b.counts[1] == 100);
}

TEST_CASE("degenerate series fails") {
  std::vector<double> v(100, 0.5);
  std::vector<std::int64_t> t(100);
  for (int k = 0; k < 100; ++k) t[k] = k;
  CHECK_THROWS_AS(recal::bin_pit(recal::PitSeries(std::move(v), std::move(t)), 8),
                  recal::Error);
}

TEST_CASE("preconditions are enforced") {
  const auto series = testutil::uniform_pit(100, 9);
  CHECK_THROWS_AS(recal::bin_pit(series, 4), recal::Error);
  CHECK_THROWS_AS(recal::bin_pit(testutil::uniform_pit(20, 9), 8), recal::Error);
}

TEST_CASE("binned quantities are mutually consistent") {
  const auto series = testutil::uniform_pit(1000, 31);
  const auto b = recal::bin_pit(series, 8);
  for (int v = 0; v < b.size(); ++v) {
    CHECK(b.log_rate[v] == doctest::Approx(std::log(b.counts[v] / b.widths[v])));
    CHECK(b.noise_var[v] == doctest::Approx(1.0 / b.counts[v]));
    CHECK(b.centers[v] == doctest::Approx(0.5 * (b.edges[v] + b.edges[v + 1])));
  }
  CHECK(b.t_min == 0);
  CHECK(b.t_max == 999);
}
