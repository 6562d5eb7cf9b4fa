#include <doctest.h>

#include <random>

#include "recal/archive.hpp"
#include "recal/math.hpp"
#include "recal/synth.hpp"
#include "test_util.hpp"

using recal::Climatology;
using recal::ForecastDistribution;
using recal::ForecastObservationArchive;
using recal::ForecastRecord;

namespace {

ForecastObservationArchive single_record_archive() {
  ForecastRecord rec;
  rec.time_index = 0;
  rec.observation = 0.0;
  rec.forecast = ForecastDistribution::normal(0.0, 1.0);
  std::vector<ForecastRecord> recs;
  recs.push_back(std::move(rec));
  return ForecastObservationArchive(std::move(recs));
}

}  // namespace

TEST_CASE("pit of a single self-centered record") {
  const auto series = recal::pit(single_record_archive());
  REQUIRE(series.size() == 1);
  CHECK(series.values()[0] == doctest::Approx(0.5).epsilon(1e-14));
  CHECK(series.times()[0] == 0);
}

TEST_CASE("self-consistent simulation yields uniform PIT") {
  // Observations drawn from each forecast; uniformity is the PIT's defining
  // property.
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> uni(0.0, 1.0);
  const std::size_t n = 100000;
  std::vector<ForecastRecord> recs;
  recs.reserve(n);
  for (std::size_t i = 0; i < n; ++i) {
    const double mu = -2.0 + 4.0 * uni(rng);
    const double sd = 0.3 + 2.0 * uni(rng);
    std::normal_distribution<double> draw(mu, sd);
    ForecastRecord rec;
    rec.time_index = static_cast<std::int64_t>(i);
    rec.observation = draw(rng);
    rec.forecast = ForecastDistribution::normal(mu, sd);
    recs.push_back(std::move(rec));
  }
  const auto series = recal::pit(ForecastObservationArchive(std::move(recs)));
  CHECK(testutil::ks_uniform(series.values()) < 0.01);
}

TEST_CASE("miscalibrated PIT matches the change-of-variables density") {
  const recal::GaussianPairScenario scenario;  // N(0,1) truth vs N(0.3,1.3^2)
  const auto archive = recal::gaussian_pair_foa(scenario, 100000, 99);
  const auto series = recal::pit(archive);
  const auto density = recal::gaussian_pair_pit_density(scenario);

  // 20-bin histogram chi^2 against expected counts from the analytic density.
  constexpr int kBins = 20;
  std::vector<long> counts(kBins, 0);
  for (double f : series.values())
    ++counts[std::clamp(static_cast<int>(f * kBins), 0, kBins - 1)];
  double stat = 0.0;
  for (int b = 0; b < kBins; ++b) {
    const double p = testutil::simpson(density, b / 20.0, (b + 1) / 20.0, 200);
    const double expected = p * static_cast<double>(series.size());
    const double d = counts[b] - expected;
    stat += d * d / expected;
  }
  CHECK(testutil::chi2_pvalue(stat, kBins - 1) > 1e-3);
}

TEST_CASE("ignorance of the climatology itself is zero") {
  auto clim = Climatology{ForecastDistribution::normal(0.0, 2.0)};
  std::vector<ForecastRecord> recs;
  for (int i = 0; i < 5; ++i) {
    ForecastRecord rec;
    rec.time_index = i;
    rec.observation = 0.5 * i - 1.0;
    rec.forecast = ForecastDistribution::normal(0.0, 2.0);
    recs.push_back(std::move(rec));
  }
  const auto archive = ForecastObservationArchive(std::move(recs));
  CHECK(recal::ignorance(archive, clim) == doctest::Approx(0.0).epsilon(1e-14));
}

TEST_CASE("ignorance closed form: sharper forecast at the mode wins one bit") {
  // -log2(phi(0;0,1)/phi(0;0,2)) = -log2(2) = -1 bit.
  auto clim = Climatology{ForecastDistribution::normal(0.0, 2.0)};
  ForecastRecord rec;
  rec.time_index = 0;
  rec.observation = 0.0;
  rec.forecast = ForecastDistribution::normal(0.0, 1.0);
  std::vector<ForecastRecord> recs;
  recs.push_back(std::move(rec));
  const auto archive = ForecastObservationArchive(std::move(recs));
  CHECK(recal::ignorance(archive, clim) == doctest::Approx(-1.0).epsilon(1e-12));
}

TEST_CASE("ignorance averages per-record scores") {
  auto clim = Climatology{ForecastDistribution::normal(0.0, 3.0)};
  auto make = [](std::int64_t t, double obs, double mu, double sd) {
    ForecastRecord rec;
    rec.time_index = t;
    rec.observation = obs;
    rec.forecast = ForecastDistribution::normal(mu, sd);
    return rec;
  };
  std::vector<ForecastRecord> both{make(0, 0.2, 0.0, 1.0), make(1, -1.0, 0.5, 2.0)};
  std::vector<ForecastRecord> first{both[0]};
  std::vector<ForecastRecord> second{both[1]};
  const double s1 = recal::ignorance(ForecastObservationArchive(std::move(first)), clim);
  const double s2 = recal::ignorance(ForecastObservationArchive(std::move(second)), clim);
  const double s = recal::ignorance(ForecastObservationArchive(std::move(both)), clim);
  CHECK(s == doctest::Approx(0.5 * (s1 + s2)).epsilon(1e-13));
}

TEST_CASE("ignorance difference of identical archives is exactly zero") {
  const auto a = recal::gaussian_pair_foa({}, 50, 3);
  CHECK(recal::ignorance_difference(a, a) == 0.0);
}

TEST_CASE("ignorance difference equals the mean log ratio") {
  const auto a = recal::gaussian_pair_foa({}, 200, 4);
  std::vector<ForecastRecord> sharper;
  for (const auto& rec : a.records()) {
    ForecastRecord r = rec;
    r.forecast = ForecastDistribution::normal(0.0, 1.1);
    sharper.push_back(std::move(r));
  }
  const auto b = ForecastObservationArchive(std::move(sharper));
  double mean = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    mean += recal::log2_of(b[i].forecast.pdf(a[i].observation) /
                           a[i].forecast.pdf(a[i].observation));
  }
  mean /= static_cast<double>(a.size());
  CHECK(recal::ignorance_difference(a, b) == doctest::Approx(-mean).epsilon(1e-12));
}

TEST_CASE("scoring failures identify the record") {
  auto clim = Climatology{ForecastDistribution::normal(0.0, 2.0)};
  ForecastRecord rec;
  rec.time_index = 17;
  rec.observation = 5.0;  // outside the grid support, pdf = 0
  rec.forecast = ForecastDistribution::grid_cdf({0.0, 1.0}, {0.0, 1.0});
  std::vector<ForecastRecord> recs;
  recs.push_back(std::move(rec));
  const auto archive = ForecastObservationArchive(std::move(recs));
  try {
    recal::ignorance(archive, clim);
    FAIL("expected ScoringError");
  } catch (const recal::ScoringError& e) {
    CHECK(e.time_index == 17);
  }
}

TEST_CASE("pit clamps exact endpoint values and counts them") {
  ForecastRecord rec;
  rec.time_index = 0;
  rec.observation = 2.0;  // beyond the grid support
  rec.forecast = ForecastDistribution::grid_cdf({0.0, 1.0}, {0.0, 1.0});
  std::vector<ForecastRecord> recs;
  recs.push_back(std::move(rec));
  const auto series = recal::pit(ForecastObservationArchive(std::move(recs)));
  CHECK(series.values()[0] == doctest::Approx(1.0 - 1e-12));
  CHECK(series.clamped_high() == 1);
  CHECK(series.clamped_low() == 0);
}

TEST_CASE("archives reject nonincreasing time indices") {
  std::vector<ForecastRecord> recs(2);
  recs[0].time_index = 5;
  recs[0].forecast = ForecastDistribution::normal(0, 1);
  recs[1].time_index = 5;
  recs[1].forecast = ForecastDistribution::normal(0, 1);
  CHECK_THROWS_AS(ForecastObservationArchive(std::move(recs)), recal::Error);
}

TEST_CASE("pit inversion recovers observations") {
  const auto archive = recal::gaussian_pair_foa({}, 500, 11);
  const auto series = recal::pit(archive);
  for (std::size_t i = 0; i < archive.size(); i += 25) {
    const double x = archive[i].forecast.quantile(series.values()[i]);
    CHECK(x == doctest::Approx(archive[i].observation).epsilon(1e-8));
  }
}
