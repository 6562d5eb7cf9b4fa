#pragma once

#include <cstdint>
#include <memory>
#include <vector>

#include "recal/forecast.hpp"
#include "recal/gpme.hpp"

namespace recal {

/// A published forecast reweighted by the fitted PIT density:
///   p1(x) = pi_hat(F(x)) * p(x),
/// with CDF G(F(x)) where G is the cumulative of pi_hat. Immutable; all
/// operations are pure.
class RecalibratedForecast {
 public:
  RecalibratedForecast(ForecastDistribution base, std::shared_ptr<const GpmeModel> model,
                       bool input_was_recalibrated);

  double pdf(double x) const;
  double cdf(double x) const;
  /// Inverts G by monotone interpolation, then the base quantile.
  double quantile(double q) const;
  /// Inverse-CDF sampling; deterministic given the seed.
  std::vector<double> sample(std::size_t count, std::uint64_t seed) const;

  /// G evaluated at f in [0,1]; the PIT map of the recalibrated forecast.
  double gtilde(double f) const;

  /// Grid-cdf representation for serialization through the FOA schema.
  /// extra_knots (e.g. the record's own observation) are inserted exactly.
  ForecastDistribution to_grid_distribution(std::size_t points = 513,
                                            const std::vector<double>& extra_knots = {}) const;

  const ForecastDistribution& base() const { return base_; }
  const GpmeModel& model() const { return *model_; }
  /// True when the base forecast was itself already recalibrated once.
  bool input_was_recalibrated() const { return input_was_recalibrated_; }

 private:
  ForecastDistribution base_;
  std::shared_ptr<const GpmeModel> model_;
  std::vector<double> gtilde_;  // cumulative of pi_hat on the model grid
  bool input_was_recalibrated_;
};

RecalibratedForecast recalibrate(ForecastDistribution base,
                                 std::shared_ptr<const GpmeModel> model,
                                 bool base_already_recalibrated = false);

}  // namespace recal
