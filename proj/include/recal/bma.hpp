#pragma once

#include <vector>

#include "recal/forecast.hpp"

namespace recal {

/// Member values of every model for one forecast case: members[k][j] is
/// member j of model k.
using MultiModelEnsemble = std::vector<std::vector<double>>;

/// Bayesian model averaging over multi-model ensembles with exchangeable
/// members: every member of model k carries weight w_k/m_k and Gaussian
/// width sigma_k, after a per-model linear bias correction.
struct BmaModel {
  std::vector<double> weights;       // per model, on the simplex
  std::vector<double> sigmas;        // per model, > 0
  std::vector<double> bias_intercept;  // a_k
  std::vector<double> bias_slope;      // b_k
  std::vector<int> ensemble_sizes;
  bool converged = false;
  int iterations = 0;
  std::vector<double> loglik_history;  // natural log, one entry per iteration
};

struct BmaConfig {
  double tolerance = 1e-8;  // log-likelihood gain per iteration
  int max_iterations = 500;
  double min_sigma = 1e-6;
};

/// EM fit of weights and widths after per-model least-squares bias
/// correction (observations regressed on the model's ensemble mean).
/// Requires >= 1 model and >= 20 training cases; on non-convergence the
/// best iterate is returned with converged = false.
BmaModel bma_em_fit(const std::vector<MultiModelEnsemble>& ensembles,
                    const std::vector<double>& observations,
                    const BmaConfig& config = {});

/// Mixture forecast for one case from its raw ensemble members.
ForecastDistribution bma_forecast(const BmaModel& model,
                                  const MultiModelEnsemble& ensemble);

}  // namespace recal
