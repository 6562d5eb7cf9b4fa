#pragma once

#include <cstdint>
#include <functional>

#include "recal/archive.hpp"
#include "recal/bma.hpp"
#include "recal/moore_spiegel.hpp"

namespace recal {

/// Analytic scenario: observations from one Gaussian, every published
/// forecast a fixed (mis)specified Gaussian.
struct GaussianPairScenario {
  double truth_mean = 0.0;
  double truth_sd = 1.0;
  double forecast_mean = 0.3;
  double forecast_sd = 1.3;
};

ForecastObservationArchive gaussian_pair_foa(const GaussianPairScenario& scenario,
                                             long n, std::uint64_t seed);

/// The exact PIT density of the scenario by change of variables:
/// f -> phi(x; truth)/phi(x; forecast) at x = mu_f + sd_f * Phi^-1(f).
std::function<double(double)> gaussian_pair_pit_density(const GaussianPairScenario& scenario);

/// Moore-Spiegel ensemble pipeline: truth trajectory at (R, Gamma),
/// ensembles evolved with a deliberately imperfect model (R', Gamma'),
/// kernel-dressed and blended with an empirical climatology. The kernel
/// width and blend weight are chosen by minimising training ignorance.
struct EnsembleForecastConfig {
  int ensemble_size = 127;
  double perturbation_sd = 0.05;  // analysis noise and ensemble spread, state units
  int lead_steps = 8;
  double dt = 0.01;
  double truth_R = 10.0, truth_Gamma = 3.6;
  double model_R = 10.5, model_Gamma = 3.6;  // forecast-model parameters
  long spinup_steps = 20000;
  long decorrelation_stride = 500;  // steps between sampled initial states
  int climatology_components = 200;
  // Dressing search. sigma_k by golden section within [sd/64, 4*sd] of the
  // member scatter; alpha on the fixed grid {0, 0.05, ..., 1}.
  double alpha_grid_step = 0.05;
};

struct CircuitDressing {
  double kernel_width = 0.0;
  double blend_alpha = 0.0;
  double training_ignorance = 0.0;  // bits, relative to the climatology
};

ForecastObservationArchive make_circuit_foa(const EnsembleForecastConfig& config,
                                            long n_forecasts, std::uint64_t seed,
                                            CircuitDressing* dressing_out = nullptr,
                                            Climatology* climatology_out = nullptr);

/// Seasonal multi-model scenario with serially correlated forecast errors:
/// an AR(2) anomaly plus seasonal cycle is forecast by biased model
/// ensembles sharing a slow AR(1) error, BMA is trained on the first
/// train_window cases, and the remaining cases form the archive. With
/// zero biases and zero shared error the system is calibrated.
struct EnsoLikeConfig {
  long n_cases = 1236;
  int train_window = 36;
  std::vector<int> ensemble_sizes = {6, 10, 12};
  std::vector<double> model_biases = {0.6, -0.3, 0.4};
  std::vector<double> member_noise_sds = {0.5, 0.5, 0.5};
  double seasonal_amplitude = 1.0;
  double ar1 = 1.2, ar2 = -0.3;   // anomaly recursion coefficients
  double anomaly_noise_sd = 0.3;
  double obs_noise_sd = 0.5;      // also the calibrated member noise scale
  double shared_error_sd = 0.5;   // slow AR(1) forecast error; 0 => calibrated
  double shared_error_rho = 0.9;
};

ForecastObservationArchive make_enso_like_foa(const EnsoLikeConfig& config,
                                              std::uint64_t seed,
                                              BmaModel* bma_out = nullptr);

}  // namespace recal
