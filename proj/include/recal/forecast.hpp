#pragma once

#include <string>
#include <variant>
#include <vector>

namespace recal {

/// Weighted sum of normal densities. Weights live on the probability
/// simplex, sds are strictly positive.
struct GaussianMixture {
  std::vector<double> weights;
  std::vector<double> means;
  std::vector<double> sds;
};

/// Piecewise-linear CDF on strictly increasing abscissae; first value 0,
/// last value 1, strictly increasing between interior knots (so the implied
/// piecewise-constant pdf is positive on the support).
struct GridCdf {
  std::vector<double> xs;
  std::vector<double> cdf;
};

/// An absolutely continuous univariate forecast distribution with pdf, cdf
/// and quantile evaluation. Immutable after construction.
class ForecastDistribution {
 public:
  /// Validates and normalises weights to sum exactly to 1.
  static ForecastDistribution gaussian_mixture(std::vector<double> weights,
                                               std::vector<double> means,
                                               std::vector<double> sds);
  static ForecastDistribution normal(double mean, double sd) {
    return gaussian_mixture({1.0}, {mean}, {sd});
  }
  static ForecastDistribution grid_cdf(std::vector<double> xs,
                                       std::vector<double> cdf);

  double pdf(double x) const;
  double cdf(double x) const;
  /// Inverse CDF for q in (0,1). Gaussian mixtures invert by bisection on
  /// cdf() to 1e-10 absolute tolerance in probability; grid CDFs invert the
  /// piecewise-linear interpolant exactly.
  double quantile(double q) const;

  bool is_mixture() const { return std::holds_alternative<GaussianMixture>(impl_); }
  const GaussianMixture& mixture() const { return std::get<GaussianMixture>(impl_); }
  const GridCdf& grid() const { return std::get<GridCdf>(impl_); }

 private:
  explicit ForecastDistribution(GaussianMixture m) : impl_(std::move(m)) {}
  explicit ForecastDistribution(GridCdf g) : impl_(std::move(g)) {}
  std::variant<GaussianMixture, GridCdf> impl_;
};

/// Reference density for ignorance scoring.
struct Climatology {
  ForecastDistribution density;
};

}  // namespace recal
