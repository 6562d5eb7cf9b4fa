#pragma once

#include <cmath>
#include <string>

namespace recal {

/// Stationary kernel hyperparameters: K(f1,f2) = A k((f1-f2)/sigma).
/// jitter is the diagonal regularisation that was needed (if any) to make
/// Q + D factorizable.
struct KernelParams {
  double amplitude = 1.0;
  double length_scale = 0.1;
  double jitter = 0.0;
};

/// Pluggable stationary covariance on PIT space.
class Kernel {
 public:
  virtual ~Kernel() = default;
  virtual double operator()(double f1, double f2, const KernelParams& p) const = 0;
  virtual std::string name() const = 0;
};

class SquaredExponentialKernel final : public Kernel {
 public:
  double operator()(double f1, double f2, const KernelParams& p) const override {
    const double d = (f1 - f2) / p.length_scale;
    return p.amplitude * std::exp(-0.5 * d * d);
  }
  std::string name() const override { return "squared-exponential"; }
};

const Kernel& default_kernel();

}  // namespace recal
