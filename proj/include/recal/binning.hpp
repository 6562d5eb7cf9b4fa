#pragma once

#include <cstdint>
#include <vector>

#include "recal/archive.hpp"

namespace recal {

/// Equal-width binning of a PIT series over [0,1] with no empty bins.
/// Carries everything the Poisson-normal likelihood needs: counts n_v,
/// dimensionless widths omega_v (sum 1), the data vector l1_v = ln(n_v/omega_v)
/// and the noise variances D_vv = 1/n_v.
struct BinnedPit {
  std::vector<double> edges;      // B+1
  std::vector<int> counts;        // n_v, all >= 1
  std::vector<double> centers;    // x_v
  std::vector<double> widths;     // omega_v
  std::vector<double> log_rate;   // l1_v
  std::vector<double> noise_var;  // 1/n_v
  long total = 0;                 // N
  std::int64_t t_min = 0, t_max = 0;  // training time range

  int size() const { return static_cast<int>(counts.size()); }
};

/// Bins with B = floor(N/target_count); while any bin is empty B is
/// decremented. Throws if even B = 2 leaves an empty bin.
/// Requires N >= 3*target_count and target_count >= 5.
BinnedPit bin_pit(const PitSeries& series, int target_count);

}  // namespace recal
