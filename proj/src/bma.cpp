#include "recal/bma.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "recal/math.hpp"

namespace recal {

namespace {

double ensemble_mean(const std::vector<double>& members) {
  return std::accumulate(members.begin(), members.end(), 0.0) /
         static_cast<double>(members.size());
}

}  // namespace

BmaModel bma_em_fit(const std::vector<MultiModelEnsemble>& ensembles,
                    const std::vector<double>& observations, const BmaConfig& config) {
  const std::size_t cases = ensembles.size();
  if (cases != observations.size()) throw Error("bma: ensembles/observations mismatch");
  if (cases < 20) throw Error("bma: need at least 20 training cases");
  if (cases == 0 || ensembles[0].empty()) throw Error("bma: need at least one model");
  const std::size_t models = ensembles[0].size();
  for (const auto& e : ensembles) {
    if (e.size() != models) throw Error("bma: inconsistent model count across cases");
    for (std::size_t k = 0; k < models; ++k) {
      if (e[k].empty()) throw Error("bma: empty ensemble");
      if (e[k].size() != ensembles[0][k].size())
        throw Error("bma: inconsistent ensemble size across cases");
    }
  }

  BmaModel m;
  m.weights.assign(models, 1.0 / static_cast<double>(models));
  m.sigmas.assign(models, 1.0);
  m.bias_intercept.assign(models, 0.0);
  m.bias_slope.assign(models, 1.0);
  m.ensemble_sizes.resize(models);
  for (std::size_t k = 0; k < models; ++k)
    m.ensemble_sizes[k] = static_cast<int>(ensembles[0][k].size());

  // Per-model bias correction: observations regressed on the ensemble mean.
  for (std::size_t k = 0; k < models; ++k) {
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    for (std::size_t t = 0; t < cases; ++t) {
      const double xm = ensemble_mean(ensembles[t][k]);
      sx += xm;
      sy += observations[t];
      sxx += xm * xm;
      sxy += xm * observations[t];
    }
    const double n = static_cast<double>(cases);
    const double denom = n * sxx - sx * sx;
    if (std::abs(denom) > 1e-12 * std::max(1.0, sxx * n)) {
      m.bias_slope[k] = (n * sxy - sx * sy) / denom;
      m.bias_intercept[k] = (sy - m.bias_slope[k] * sx) / n;
    } else {  // constant forecasts: intercept-only correction
      m.bias_slope[k] = 0.0;
      m.bias_intercept[k] = sy / n;
    }
  }

  // Bias-corrected members, flattened per model.
  std::vector<std::vector<std::vector<double>>> corrected(cases);
  for (std::size_t t = 0; t < cases; ++t) {
    corrected[t].resize(models);
    for (std::size_t k = 0; k < models; ++k) {
      corrected[t][k].reserve(ensembles[t][k].size());
      for (double v : ensembles[t][k])
        corrected[t][k].push_back(m.bias_intercept[k] + m.bias_slope[k] * v);
    }
  }

  // Initial widths from pooled residuals.
  for (std::size_t k = 0; k < models; ++k) {
    double ss = 0.0;
    long cnt = 0;
    for (std::size_t t = 0; t < cases; ++t) {
      for (double v : corrected[t][k]) {
        const double d = observations[t] - v;
        ss += d * d;
        ++cnt;
      }
    }
    m.sigmas[k] = std::max(std::sqrt(ss / static_cast<double>(cnt)), config.min_sigma);
  }

  auto loglik = [&]() {
    double total = 0.0;
    for (std::size_t t = 0; t < cases; ++t) {
      double p = 0.0;
      for (std::size_t k = 0; k < models; ++k) {
        const double wk = m.weights[k] / corrected[t][k].size();
        for (double v : corrected[t][k])
          p += wk * normal_pdf(observations[t], v, m.sigmas[k]);
      }
      total += std::log(std::max(p, 1e-300));
    }
    return total;
  };

  double prev = loglik();
  m.loglik_history.push_back(prev);
  m.converged = false;
  std::vector<double> resp_w(models), resp_ss(models);

  for (m.iterations = 0; m.iterations < config.max_iterations; ++m.iterations) {
    std::fill(resp_w.begin(), resp_w.end(), 0.0);
    std::fill(resp_ss.begin(), resp_ss.end(), 0.0);

    for (std::size_t t = 0; t < cases; ++t) {
      double norm = 0.0;
      for (std::size_t k = 0; k < models; ++k) {
        const double wk = m.weights[k] / corrected[t][k].size();
        for (double v : corrected[t][k])
          norm += wk * normal_pdf(observations[t], v, m.sigmas[k]);
      }
      if (!(norm > 0.0)) continue;
      for (std::size_t k = 0; k < models; ++k) {
        const double wk = m.weights[k] / corrected[t][k].size();
        for (double v : corrected[t][k]) {
          const double z = wk * normal_pdf(observations[t], v, m.sigmas[k]) / norm;
          const double d = observations[t] - v;
          resp_w[k] += z;
          resp_ss[k] += z * d * d;
        }
      }
    }

    const double total_w = std::accumulate(resp_w.begin(), resp_w.end(), 0.0);
    for (std::size_t k = 0; k < models; ++k) {
      m.weights[k] = resp_w[k] / total_w;
      if (resp_w[k] > 0.0)
        m.sigmas[k] = std::max(std::sqrt(resp_ss[k] / resp_w[k]), config.min_sigma);
    }

    const double cur = loglik();
    m.loglik_history.push_back(cur);
    if (cur - prev < config.tolerance) {
      m.converged = true;
      ++m.iterations;
      break;
    }
    prev = cur;
  }
  return m;
}

ForecastDistribution bma_forecast(const BmaModel& model, const MultiModelEnsemble& ensemble) {
  if (ensemble.size() != model.weights.size())
    throw Error("bma_forecast: model count mismatch");
  std::vector<double> w, mu, sd;
  for (std::size_t k = 0; k < ensemble.size(); ++k) {
    if (ensemble[k].empty()) throw Error("bma_forecast: empty ensemble");
    const double wk = model.weights[k] / static_cast<double>(ensemble[k].size());
    for (double v : ensemble[k]) {
      w.push_back(wk);
      mu.push_back(model.bias_intercept[k] + model.bias_slope[k] * v);
      sd.push_back(model.sigmas[k]);
    }
  }
  return ForecastDistribution::gaussian_mixture(std::move(w), std::move(mu), std::move(sd));
}

}  // namespace recal
