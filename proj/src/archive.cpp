#include "recal/archive.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "recal/math.hpp"

namespace recal {

namespace {
constexpr double kPitClampEps = 1e-12;
}

ForecastObservationArchive::ForecastObservationArchive(
    std::vector<ForecastRecord> records)
    : records_(std::move(records)) {
  for (std::size_t i = 1; i < records_.size(); ++i) {
    if (records_[i].time_index <= records_[i - 1].time_index)
      throw Error("archive: time_index must be strictly increasing");
  }
}

PitSeries::PitSeries(std::vector<double> values, std::vector<std::int64_t> times,
                     std::size_t clamped_low, std::size_t clamped_high)
    : values_(std::move(values)),
      times_(std::move(times)),
      clamped_low_(clamped_low),
      clamped_high_(clamped_high) {
  if (values_.size() != times_.size())
    throw Error("pit series: values and time indices must be matched");
  for (double f : values_) {
    if (!(f >= 0.0 && f <= 1.0)) throw Error("pit series: values must lie in [0,1]");
  }
}

PitSeries pit(const ForecastObservationArchive& archive) {
  if (archive.empty()) throw Error("pit: archive is empty");
  std::vector<double> values;
  std::vector<std::int64_t> times;
  values.reserve(archive.size());
  times.reserve(archive.size());
  std::size_t lo = 0, hi = 0;
  for (const auto& rec : archive.records()) {
    double f = rec.forecast.cdf(rec.observation);
    if (f < kPitClampEps) { f = kPitClampEps; ++lo; }
    if (f > 1.0 - kPitClampEps) { f = 1.0 - kPitClampEps; ++hi; }
    values.push_back(f);
    times.push_back(rec.time_index);
  }
  return PitSeries(std::move(values), std::move(times), lo, hi);
}

double ignorance(const ForecastObservationArchive& archive, const Climatology& clim) {
  if (archive.empty()) throw Error("ignorance: archive is empty");
  double sum = 0.0;
  for (const auto& rec : archive.records()) {
    const double p = rec.forecast.pdf(rec.observation);
    const double ref = clim.density.pdf(rec.observation);
    if (!(ref > 0.0) || !std::isfinite(ref)) {
      std::ostringstream os;
      os << "ignorance: climatology density not positive at observation of record t="
         << rec.time_index;
      throw ScoringError(os.str(), rec.time_index);
    }
    if (!(p > 0.0) || !std::isfinite(p)) {
      std::ostringstream os;
      os << "ignorance: forecast density vanished at observation of record t="
         << rec.time_index;
      throw ScoringError(os.str(), rec.time_index);
    }
    sum += log2_of(p / ref);
  }
  return -sum / static_cast<double>(archive.size());
}

double ignorance_difference(const ForecastObservationArchive& published,
                            const ForecastObservationArchive& recalibrated) {
  if (published.size() != recalibrated.size() || published.empty())
    throw Error("ignorance_difference: archives must be nonempty and aligned");
  double sum = 0.0;
  for (std::size_t i = 0; i < published.size(); ++i) {
    const auto& a = published[i];
    const auto& b = recalibrated[i];
    if (a.time_index != b.time_index)
      throw Error("ignorance_difference: record time indices do not match");
    const double p = a.forecast.pdf(a.observation);
    const double p1 = b.forecast.pdf(b.observation);
    if (!(p > 0.0) || !std::isfinite(p))
      throw ScoringError("ignorance_difference: published density vanished at observation",
                         a.time_index);
    if (!(p1 > 0.0) || !std::isfinite(p1))
      throw ScoringError("ignorance_difference: recalibrated density vanished at observation",
                         b.time_index);
    sum += log2_of(p1 / p);
  }
  return -sum / static_cast<double>(published.size());
}

}  // namespace recal
