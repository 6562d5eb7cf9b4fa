#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "recal/forecast.hpp"

namespace recal {

/// One forecast/observation pair. The metadata map stands in for the
/// conditioning information of the forecast system; the toolkit never
/// inspects it.
struct ForecastRecord {
  std::int64_t time_index = 0;
  double observation = 0.0;
  ForecastDistribution forecast = ForecastDistribution::normal(0.0, 1.0);
  std::map<std::string, std::string> metadata;
};

/// Ordered archive of forecast/observation pairs with strictly increasing
/// time indices. Immutable after construction.
class ForecastObservationArchive {
 public:
  ForecastObservationArchive() = default;
  explicit ForecastObservationArchive(std::vector<ForecastRecord> records);

  const std::vector<ForecastRecord>& records() const { return records_; }
  std::size_t size() const { return records_.size(); }
  bool empty() const { return records_.empty(); }
  const ForecastRecord& operator[](std::size_t i) const { return records_[i]; }

 private:
  std::vector<ForecastRecord> records_;
};

/// PIT values f_n in [0,1] aligned with their source time indices. Values
/// that land exactly on 0 or 1 are clamped into [eps, 1-eps] (eps = 1e-12)
/// and counted, since the downstream log-density fit needs the open
/// interval.
class PitSeries {
 public:
  PitSeries() = default;
  PitSeries(std::vector<double> values, std::vector<std::int64_t> times,
            std::size_t clamped_low = 0, std::size_t clamped_high = 0);

  const std::vector<double>& values() const { return values_; }
  const std::vector<std::int64_t>& times() const { return times_; }
  std::size_t size() const { return values_.size(); }
  std::size_t clamped_low() const { return clamped_low_; }
  std::size_t clamped_high() const { return clamped_high_; }

 private:
  std::vector<double> values_;
  std::vector<std::int64_t> times_;
  std::size_t clamped_low_ = 0, clamped_high_ = 0;
};

/// PIT of every record: f_n = F_n(x_n), order preserved.
PitSeries pit(const ForecastObservationArchive& archive);

/// Empirical ignorance score in bits: -(1/N) sum log2 p(x_n)/clim(x_n).
/// Throws ScoringError (with the record's time index) if any forecast
/// density is zero or non-finite at its observation.
double ignorance(const ForecastObservationArchive& archive,
                 const Climatology& clim);

/// Ign[recalibrated] - Ign[published]; the climatology reference cancels.
/// Archives must be aligned record-for-record (same times).
double ignorance_difference(const ForecastObservationArchive& published,
                            const ForecastObservationArchive& recalibrated);

}  // namespace recal
