#include "recal/recalibrate.hpp"

#include <algorithm>
#include <cmath>
#include <random>

#include "recal/math.hpp"

namespace recal {

RecalibratedForecast::RecalibratedForecast(ForecastDistribution base,
                                           std::shared_ptr<const GpmeModel> model,
                                           bool input_was_recalibrated)
    : base_(std::move(base)),
      model_(std::move(model)),
      input_was_recalibrated_(input_was_recalibrated) {
  if (!model_) throw Error("recalibrate: null model");
  const auto& grid = model_->grid;
  const auto& dens = model_->density;
  const std::size_t m = grid.size();
  gtilde_.assign(m, 0.0);
  for (std::size_t i = 1; i < m; ++i) {
    gtilde_[i] = gtilde_[i - 1] +
                 0.5 * (dens[i] + dens[i - 1]) * (grid[i] - grid[i - 1]);
  }
  // pi_hat integrates to 1 on this grid by construction; pin the endpoint
  // exactly so G(1) = 1 and the recalibrated mass is exactly unity.
  const double total = gtilde_.back();
  if (!(total > 0.0)) throw Error("recalibrate: fitted density has no mass");
  for (double& g : gtilde_) g /= total;
  gtilde_.front() = 0.0;
  gtilde_.back() = 1.0;
}

double RecalibratedForecast::gtilde(double f) const {
  const auto& grid = model_->grid;
  if (f <= 0.0) return 0.0;
  if (f >= 1.0) return 1.0;
  const auto it = std::upper_bound(grid.begin(), grid.end(), f);
  const std::size_t i = static_cast<std::size_t>(it - grid.begin());
  const double t = (f - grid[i - 1]) / (grid[i] - grid[i - 1]);
  return gtilde_[i - 1] + t * (gtilde_[i] - gtilde_[i - 1]);
}

double RecalibratedForecast::pdf(double x) const {
  const double f = std::clamp(base_.cdf(x), 0.0, 1.0);
  return predictive_density(*model_, f) * base_.pdf(x);
}

double RecalibratedForecast::cdf(double x) const {
  return gtilde(std::clamp(base_.cdf(x), 0.0, 1.0));
}

double RecalibratedForecast::quantile(double q) const {
  if (!(q > 0.0 && q < 1.0)) throw Error("recal quantile: q must be in (0,1)");
  const auto it = std::upper_bound(gtilde_.begin(), gtilde_.end(), q);
  std::size_t i = static_cast<std::size_t>(it - gtilde_.begin());
  i = std::clamp<std::size_t>(i, 1, gtilde_.size() - 1);
  const double dg = gtilde_[i] - gtilde_[i - 1];
  const double t = dg > 0.0 ? (q - gtilde_[i - 1]) / dg : 0.0;
  const auto& grid = model_->grid;
  double f = grid[i - 1] + t * (grid[i] - grid[i - 1]);
  f = std::clamp(f, 1e-15, 1.0 - 1e-15);
  return base_.quantile(f);
}

std::vector<double> RecalibratedForecast::sample(std::size_t count,
                                                 std::uint64_t seed) const {
  if (count < 1) throw Error("recal sample: count must be >= 1");
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> uni(0.0, 1.0);
  std::vector<double> out(count);
  for (double& x : out) {
    double q = uni(rng);
    while (q <= 0.0 || q >= 1.0) q = uni(rng);
    x = quantile(q);
  }
  return out;
}

ForecastDistribution RecalibratedForecast::to_grid_distribution(
    std::size_t points, const std::vector<double>& extra_knots) const {
  if (points < 16) throw Error("to_grid_distribution: need >= 16 points");
  // Knots uniform in base-PIT space, away from the infinite base tails,
  // plus caller-requested exact knots.
  const double f_lo = 1e-9, f_hi = 1.0 - 1e-9;
  std::vector<double> fs = linspace(f_lo, f_hi, points);
  for (double x : extra_knots) {
    const double f = std::clamp(base_.cdf(x), f_lo, f_hi);
    fs.push_back(f);
  }
  std::sort(fs.begin(), fs.end());
  std::vector<double> xs, cs;
  xs.reserve(fs.size());
  cs.reserve(fs.size());
  for (double f : fs) {
    const double x = base_.quantile(f);
    if (!xs.empty() && x - xs.back() <= 1e-13 * std::max(1.0, std::abs(x)))
      continue;  // drop knots that collapse in x
    xs.push_back(x);
    cs.push_back(gtilde(f));
  }
  // Monotonic repair of roundoff plateaus, then exact endpoints.
  for (std::size_t i = 1; i < cs.size(); ++i) cs[i] = std::max(cs[i], cs[i - 1]);
  cs.front() = 0.0;
  cs.back() = 1.0;
  return ForecastDistribution::grid_cdf(std::move(xs), std::move(cs));
}

RecalibratedForecast recalibrate(ForecastDistribution base,
                                 std::shared_ptr<const GpmeModel> model,
                                 bool base_already_recalibrated) {
  return RecalibratedForecast(std::move(base), std::move(model),
                              base_already_recalibrated);
}

}  // namespace recal
