#pragma once

#include <vector>

#include "recal/archive.hpp"

namespace recal {

/// Sample autocorrelation of a PIT series with the white-noise band and the
/// thinning factor it suggests.
struct AcfReport {
  std::vector<double> acf;     // lags 0..max_lag; acf[0] == 1
  double noise_band = 0.0;     // 2/sqrt(N)
  int suggested_factor = 1;
};

/// ACF of the mean-centered series. suggested_factor is the smallest lag
/// k >= 1 whose next five lags (k..min(k+4, max_lag)) all sit inside the
/// +-2/sqrt(N) band, capped at factor_cap. Requires N > 4*max_lag.
AcfReport autocorrelation(const PitSeries& series, int max_lag, int factor_cap = 20);

/// Keeps elements whose position is congruent to offset modulo factor,
/// preserving order and time indices. Requires 0 <= offset < factor.
PitSeries thin(const PitSeries& series, int factor, int offset = 0);

}  // namespace recal
