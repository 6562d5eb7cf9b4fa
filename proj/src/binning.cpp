#include "recal/binning.hpp"

#include <algorithm>
#include <cmath>

#include "recal/math.hpp"

namespace recal {

namespace {

// Counts per equal-width bin; values exactly at 1 fall into the last bin.
std::vector<int> count_bins(const std::vector<double>& values, int bins) {
  std::vector<int> counts(bins, 0);
  for (double f : values) {
    int v = static_cast<int>(f * bins);
    v = std::clamp(v, 0, bins - 1);
    ++counts[v];
  }
  return counts;
}

}  // namespace

BinnedPit bin_pit(const PitSeries& series, int target_count) {
  const long n = static_cast<long>(series.size());
  if (target_count < 5) throw Error("bin_pit: target_count must be >= 5");
  if (n < 3L * target_count)
    throw Error("bin_pit: need at least 3*target_count PIT values");

  int bins = static_cast<int>(n / target_count);
  std::vector<int> counts;
  for (; bins >= 2; --bins) {
    counts = count_bins(series.values(), bins);
    if (*std::min_element(counts.begin(), counts.end()) >= 1) break;
  }
  if (bins < 2)
    throw Error("bin_pit: series is degenerate, even 2 bins leave one empty");

  BinnedPit out;
  out.counts = std::move(counts);
  out.total = n;
  out.edges.resize(bins + 1);
  out.centers.resize(bins);
  out.widths.resize(bins);
  out.log_rate.resize(bins);
  out.noise_var.resize(bins);
  const double w = 1.0 / bins;
  for (int v = 0; v <= bins; ++v) out.edges[v] = v * w;
  out.edges.back() = 1.0;
  for (int v = 0; v < bins; ++v) {
    out.centers[v] = (v + 0.5) * w;
    out.widths[v] = w;
    out.log_rate[v] = std::log(out.counts[v] / w);
    out.noise_var[v] = 1.0 / out.counts[v];
  }
  out.t_min = series.times().empty() ? 0 : *std::min_element(series.times().begin(),
                                                             series.times().end());
  out.t_max = series.times().empty() ? 0 : *std::max_element(series.times().begin(),
                                                             series.times().end());
  return out;
}

}  // namespace recal
