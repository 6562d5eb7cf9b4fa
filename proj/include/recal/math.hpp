#pragma once

#include <cmath>
#include <cstddef>
#include <span>
#include <stdexcept>
#include <vector>

namespace recal {

inline constexpr double kLog2E = 1.4426950408889634074;  // 1/ln(2)

inline double log2_of(double x) { return std::log(x) * kLog2E; }

double normal_pdf(double x, double mean, double sd);
double normal_cdf(double x, double mean, double sd);
/// Inverse standard normal CDF, p in (0,1).
double normal_quantile(double p);

/// Trapezoid rule on a uniformly spaced grid with step h.
double trapezoid(std::span<const double> y, double h);

/// n points spanning [a,b] inclusive.
std::vector<double> linspace(double a, double b, std::size_t n);

/// Shape-preserving cubic Hermite interpolant (Fritsch-Carlson slopes) on a
/// strictly increasing abscissa grid. Does not overshoot beyond the local
/// data range, so exp() of an interpolated log-density stays within the
/// range spanned by neighbouring grid values.
class MonotoneCubic {
 public:
  MonotoneCubic() = default;
  MonotoneCubic(std::vector<double> xs, std::vector<double> ys);

  /// Evaluate at x; clamps to the grid ends outside [xs.front(), xs.back()].
  double operator()(double x) const;

  bool empty() const { return xs_.empty(); }

 private:
  std::vector<double> xs_, ys_, slopes_;
};

/// Base error type for the toolkit.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A forecast density vanished (or was non-finite) at its own observation.
class ScoringError : public Error {
 public:
  ScoringError(const std::string& what, long long time_index)
      : Error(what), time_index(time_index) {}
  long long time_index;
};

/// Malformed input file; line is 1-based.
class ParseError : public Error {
 public:
  ParseError(const std::string& what, std::size_t line = 0)
      : Error(what), line(line) {}
  std::size_t line;
};

}  // namespace recal
