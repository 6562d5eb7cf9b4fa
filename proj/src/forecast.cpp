#include "recal/forecast.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "recal/math.hpp"

namespace recal {

namespace {

void validate_mixture(const GaussianMixture& m) {
  const std::size_t k = m.weights.size();
  if (k == 0 || m.means.size() != k || m.sds.size() != k)
    throw Error("gaussian mixture: component arrays must be nonempty and matched");
  double sum = 0.0;
  for (std::size_t i = 0; i < k; ++i) {
    if (!(m.weights[i] >= 0.0) || !std::isfinite(m.weights[i]))
      throw Error("gaussian mixture: weights must be nonnegative");
    if (!(m.sds[i] > 0.0) || !std::isfinite(m.sds[i]))
      throw Error("gaussian mixture: sds must be positive");
    if (!std::isfinite(m.means[i])) throw Error("gaussian mixture: non-finite mean");
    sum += m.weights[i];
  }
  if (!(sum > 0.0)) throw Error("gaussian mixture: weights must not all vanish");
}

void validate_grid(const GridCdf& g) {
  const std::size_t n = g.xs.size();
  if (n < 2 || g.cdf.size() != n)
    throw Error("grid cdf: need >= 2 matched knots");
  if (g.cdf.front() != 0.0 || g.cdf.back() != 1.0)
    throw Error("grid cdf: cdf must start at 0 and end at 1");
  for (std::size_t i = 0; i + 1 < n; ++i) {
    if (!(g.xs[i + 1] > g.xs[i]))
      throw Error("grid cdf: abscissae must be strictly increasing");
    if (!(g.cdf[i + 1] >= g.cdf[i]))
      throw Error("grid cdf: cdf values must be nondecreasing");
  }
}

}  // namespace

ForecastDistribution ForecastDistribution::gaussian_mixture(
    std::vector<double> weights, std::vector<double> means, std::vector<double> sds) {
  GaussianMixture m{std::move(weights), std::move(means), std::move(sds)};
  validate_mixture(m);
  const double sum = std::accumulate(m.weights.begin(), m.weights.end(), 0.0);
  for (double& w : m.weights) w /= sum;
  return ForecastDistribution(std::move(m));
}

ForecastDistribution ForecastDistribution::grid_cdf(std::vector<double> xs,
                                                    std::vector<double> cdf) {
  GridCdf g{std::move(xs), std::move(cdf)};
  validate_grid(g);
  return ForecastDistribution(std::move(g));
}

double ForecastDistribution::pdf(double x) const {
  if (is_mixture()) {
    const auto& m = mixture();
    double p = 0.0;
    for (std::size_t i = 0; i < m.weights.size(); ++i)
      p += m.weights[i] * normal_pdf(x, m.means[i], m.sds[i]);
    return p;
  }
  const auto& g = grid();
  if (x < g.xs.front() || x > g.xs.back()) return 0.0;
  auto it = std::upper_bound(g.xs.begin(), g.xs.end(), x);
  std::size_t i = (it == g.xs.end()) ? g.xs.size() - 1
                                     : static_cast<std::size_t>(it - g.xs.begin());
  if (i == 0) i = 1;
  return (g.cdf[i] - g.cdf[i - 1]) / (g.xs[i] - g.xs[i - 1]);
}

double ForecastDistribution::cdf(double x) const {
  if (is_mixture()) {
    const auto& m = mixture();
    double c = 0.0;
    for (std::size_t i = 0; i < m.weights.size(); ++i)
      c += m.weights[i] * normal_cdf(x, m.means[i], m.sds[i]);
    return std::clamp(c, 0.0, 1.0);
  }
  const auto& g = grid();
  if (x <= g.xs.front()) return 0.0;
  if (x >= g.xs.back()) return 1.0;
  const auto it = std::upper_bound(g.xs.begin(), g.xs.end(), x);
  const std::size_t i = static_cast<std::size_t>(it - g.xs.begin());
  const double t = (x - g.xs[i - 1]) / (g.xs[i] - g.xs[i - 1]);
  return g.cdf[i - 1] + t * (g.cdf[i] - g.cdf[i - 1]);
}

double ForecastDistribution::quantile(double q) const {
  if (!(q > 0.0 && q < 1.0)) throw Error("quantile: q must be in (0,1)");
  if (!is_mixture()) {
    const auto& g = grid();
    const auto it = std::upper_bound(g.cdf.begin(), g.cdf.end(), q);
    std::size_t i = static_cast<std::size_t>(it - g.cdf.begin());
    if (i == 0) return g.xs.front();
    if (i == g.cdf.size()) return g.xs.back();
    const double dc = g.cdf[i] - g.cdf[i - 1];
    if (dc <= 0.0) return g.xs[i];
    const double t = (q - g.cdf[i - 1]) / dc;
    return g.xs[i - 1] + t * (g.xs[i] - g.xs[i - 1]);
  }

  // Bracketing bisection on the monotone mixture CDF.
  const auto& m = mixture();
  double lo = m.means[0], hi = m.means[0];
  for (std::size_t i = 0; i < m.means.size(); ++i) {
    lo = std::min(lo, m.means[i] - 9.0 * m.sds[i]);
    hi = std::max(hi, m.means[i] + 9.0 * m.sds[i]);
  }
  double span = hi - lo;
  while (cdf(lo) > q) { lo -= span; span *= 2.0; }
  span = hi - lo;
  while (cdf(hi) < q) { hi += span; span *= 2.0; }

  double mid = 0.5 * (lo + hi);
  for (int iter = 0; iter < 200; ++iter) {
    mid = 0.5 * (lo + hi);
    const double c = cdf(mid);
    if (std::abs(c - q) <= 1e-10 &&
        hi - lo <= 1e-12 * std::max(1.0, std::abs(mid)))
      break;
    (c < q ? lo : hi) = mid;
  }
  return mid;
}

}  // namespace recal
