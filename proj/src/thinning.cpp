#include "recal/thinning.hpp"

#include <algorithm>
#include <cmath>

#include "recal/math.hpp"

namespace recal {

AcfReport autocorrelation(const PitSeries& series, int max_lag, int factor_cap) {
  const long n = static_cast<long>(series.size());
  if (max_lag < 1) throw Error("autocorrelation: max_lag must be >= 1");
  if (n <= 4L * max_lag)
    throw Error("autocorrelation: series too short for requested max_lag");

  const auto& x = series.values();
  double mean = 0.0;
  for (double v : x) mean += v;
  mean /= static_cast<double>(n);

  double denom = 0.0;
  for (double v : x) denom += (v - mean) * (v - mean);

  AcfReport rep;
  rep.acf.assign(max_lag + 1, 0.0);
  if (denom <= 0.0) throw Error("autocorrelation: series is constant");
  for (int k = 0; k <= max_lag; ++k) {
    double s = 0.0;
    for (long i = 0; i + k < n; ++i) s += (x[i] - mean) * (x[i + k] - mean);
    rep.acf[k] = std::clamp(s / denom, -1.0, 1.0);
  }
  rep.noise_band = 2.0 / std::sqrt(static_cast<double>(n));

  rep.suggested_factor = factor_cap;
  for (int k = 1; k <= max_lag; ++k) {
    bool inside = true;
    for (int j = k; j <= std::min(k + 4, max_lag); ++j) {
      if (std::abs(rep.acf[j]) >= rep.noise_band) {
        inside = false;
        break;
      }
    }
    if (inside) {
      rep.suggested_factor = std::min(k, factor_cap);
      break;
    }
  }
  rep.suggested_factor = std::max(rep.suggested_factor, 1);
  return rep;
}

PitSeries thin(const PitSeries& series, int factor, int offset) {
  if (factor < 1) throw Error("thin: factor must be >= 1");
  if (offset < 0 || offset >= factor) throw Error("thin: need 0 <= offset < factor");
  std::vector<double> values;
  std::vector<std::int64_t> times;
  for (std::size_t i = static_cast<std::size_t>(offset); i < series.size();
       i += static_cast<std::size_t>(factor)) {
    values.push_back(series.values()[i]);
    times.push_back(series.times()[i]);
  }
  return PitSeries(std::move(values), std::move(times));
}

}  // namespace recal
