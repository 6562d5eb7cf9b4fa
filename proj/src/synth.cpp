#include "recal/synth.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>

#include "recal/math.hpp"
#include "recal/rng.hpp"

namespace recal {

ForecastObservationArchive gaussian_pair_foa(const GaussianPairScenario& scenario,
                                             long n, std::uint64_t seed) {
  if (n < 1) throw Error("gaussian_pair_foa: n must be >= 1");
  if (!(scenario.truth_sd > 0.0) || !(scenario.forecast_sd > 0.0))
    throw Error("gaussian_pair_foa: sds must be positive");
  std::mt19937_64 rng = rng_for(seed, 0);
  std::normal_distribution<double> truth(scenario.truth_mean, scenario.truth_sd);
  std::vector<ForecastRecord> records;
  records.reserve(static_cast<std::size_t>(n));
  for (long t = 0; t < n; ++t) {
    ForecastRecord rec;
    rec.time_index = t;
    rec.observation = truth(rng);
    rec.forecast = ForecastDistribution::normal(scenario.forecast_mean, scenario.forecast_sd);
    records.push_back(std::move(rec));
  }
  return ForecastObservationArchive(std::move(records));
}

std::function<double(double)> gaussian_pair_pit_density(const GaussianPairScenario& s) {
  if (!(s.truth_sd > 0.0) || !(s.forecast_sd > 0.0))
    throw Error("gaussian_pair_pit_density: sds must be positive");
  return [s](double f) {
    f = std::clamp(f, 1e-15, 1.0 - 1e-15);
    const double x = s.forecast_mean + s.forecast_sd * normal_quantile(f);
    return normal_pdf(x, s.truth_mean, s.truth_sd) /
           normal_pdf(x, s.forecast_mean, s.forecast_sd);
  };
}

namespace {

// Gaussian KDE climatology over a subsample of trajectory values.
// Bandwidth by Silverman's rule on the full sample.
ForecastDistribution kde_climatology(const std::vector<double>& sample, int components) {
  const std::size_t n = sample.size();
  double mean = std::accumulate(sample.begin(), sample.end(), 0.0) / n;
  double var = 0.0;
  for (double v : sample) var += (v - mean) * (v - mean);
  var /= static_cast<double>(n - 1);
  std::vector<double> sorted = sample;
  std::sort(sorted.begin(), sorted.end());
  const double iqr = sorted[static_cast<std::size_t>(0.75 * n)] -
                     sorted[static_cast<std::size_t>(0.25 * n)];
  const double sd = std::sqrt(var);
  double bw = 0.9 * std::min(sd, iqr / 1.34) * std::pow(static_cast<double>(n), -0.2);
  if (!(bw > 0.0)) bw = std::max(sd, 1e-3);

  const int m = std::min<int>(components, static_cast<int>(n));
  std::vector<double> w(m, 1.0 / m), mu(m), s(m, bw);
  for (int i = 0; i < m; ++i) {
    const std::size_t idx = static_cast<std::size_t>((i + 0.5) * n / m);
    mu[i] = sorted[std::min(idx, n - 1)];
  }
  return ForecastDistribution::gaussian_mixture(std::move(w), std::move(mu), std::move(s));
}

struct DressingData {
  std::vector<std::vector<double>> members;  // per case, forecast-model z values
  std::vector<double> observations;
};

// Mean of -log2 of the blended density over all cases.
double dressing_score(const DressingData& d, const ForecastDistribution& clim,
                      double sigma_k, double alpha) {
  double total = 0.0;
  for (std::size_t i = 0; i < d.members.size(); ++i) {
    double mix = 0.0;
    for (double m : d.members[i]) mix += normal_pdf(d.observations[i], m, sigma_k);
    mix /= static_cast<double>(d.members[i].size());
    const double p = (1.0 - alpha) * mix + alpha * clim.pdf(d.observations[i]);
    total += log2_of(std::max(p, 1e-300));
  }
  return -total / static_cast<double>(d.members.size());
}

double golden_section(const std::function<double(double)>& f, double lo, double hi,
                      int iters = 40) {
  const double phi = 0.6180339887498949;
  double a = lo, b = hi;
  double c = b - phi * (b - a), d = a + phi * (b - a);
  double fc = f(c), fd = f(d);
  for (int i = 0; i < iters; ++i) {
    if (fc < fd) {
      b = d; d = c; fd = fc;
      c = b - phi * (b - a);
      fc = f(c);
    } else {
      a = c; c = d; fc = fd;
      d = a + phi * (b - a);
      fd = f(d);
    }
  }
  return 0.5 * (a + b);
}

}  // namespace

ForecastObservationArchive make_circuit_foa(const EnsembleForecastConfig& config,
                                            long n_forecasts, std::uint64_t seed,
                                            CircuitDressing* dressing_out,
                                            Climatology* climatology_out) {
  if (n_forecasts < 1) throw Error("make_circuit_foa: need n_forecasts >= 1");
  if (config.ensemble_size < 2) throw Error("make_circuit_foa: ensemble_size >= 2");
  if (!(config.dt > 0.0 && config.dt <= 0.05))
    throw Error("make_circuit_foa: dt must be in (0, 0.05]");

  // Truth trajectory covering all sampled initial states plus leads.
  MooreSpiegelState s0;
  s0.x = 0.1; s0.y = 0.2; s0.z = 0.1;
  s0.R = config.truth_R;
  s0.Gamma = config.truth_Gamma;
  const long span = n_forecasts * config.decorrelation_stride + config.lead_steps + 1;
  auto spun = ms_trajectory(s0, config.dt, config.spinup_steps);
  auto traj = ms_trajectory(spun.back(), config.dt, span);

  // Empirical climatology of z from ~2000 points spread over the trajectory.
  std::vector<double> clim_sample;
  const long clim_n = 2000;
  for (long i = 0; i < clim_n; ++i)
    clim_sample.push_back(traj[static_cast<std::size_t>(i * (span / clim_n))].z);
  ForecastDistribution clim = kde_climatology(clim_sample, config.climatology_components);

  // Ensembles: analysis = truth + noise, members = analysis + noise, both at
  // perturbation_sd, evolved under the (possibly imperfect) forecast model.
  DressingData data;
  data.members.resize(static_cast<std::size_t>(n_forecasts));
  data.observations.resize(static_cast<std::size_t>(n_forecasts));
  for (long i = 0; i < n_forecasts; ++i) {
    std::mt19937_64 rng = rng_for(seed, static_cast<std::uint64_t>(i));
    std::normal_distribution<double> noise(0.0, config.perturbation_sd);
    const std::size_t base = static_cast<std::size_t>(i * config.decorrelation_stride);
    const MooreSpiegelState& truth_state = traj[base];
    data.observations[static_cast<std::size_t>(i)] =
        traj[base + static_cast<std::size_t>(config.lead_steps)].z;

    MooreSpiegelState analysis = truth_state;
    analysis.x += noise(rng);
    analysis.y += noise(rng);
    analysis.z += noise(rng);

    auto& members = data.members[static_cast<std::size_t>(i)];
    members.reserve(static_cast<std::size_t>(config.ensemble_size));
    for (int e = 0; e < config.ensemble_size; ++e) {
      MooreSpiegelState m = analysis;
      m.R = config.model_R;
      m.Gamma = config.model_Gamma;
      m.x += noise(rng);
      m.y += noise(rng);
      m.z += noise(rng);
      for (int step = 0; step < config.lead_steps; ++step) m = ms_step(m, config.dt);
      if (!std::isfinite(m.z)) throw Error("make_circuit_foa: ensemble member diverged");
      members.push_back(m.z);
    }
  }

  // Member scatter sets the kernel-width search bracket.
  double scatter = 0.0;
  for (const auto& ms : data.members) {
    const double mean = std::accumulate(ms.begin(), ms.end(), 0.0) / ms.size();
    double v = 0.0;
    for (double m : ms) v += (m - mean) * (m - mean);
    scatter += std::sqrt(v / static_cast<double>(ms.size() - 1));
  }
  scatter = std::max(scatter / static_cast<double>(n_forecasts), 1e-6);

  CircuitDressing best;
  best.training_ignorance = std::numeric_limits<double>::infinity();
  for (double alpha = 0.0; alpha <= 1.0 + 1e-12; alpha += config.alpha_grid_step) {
    const double a = std::min(alpha, 1.0);
    const double sk = golden_section(
        [&](double s) { return dressing_score(data, clim, s, a); }, scatter / 64.0,
        scatter * 4.0);
    const double score = dressing_score(data, clim, sk, a);
    if (score < best.training_ignorance) {
      best.training_ignorance = score;
      best.kernel_width = sk;
      best.blend_alpha = a;
    }
  }

  const auto& cm = clim.mixture();
  std::vector<ForecastRecord> records;
  records.reserve(static_cast<std::size_t>(n_forecasts));
  for (long i = 0; i < n_forecasts; ++i) {
    const auto& members = data.members[static_cast<std::size_t>(i)];
    std::vector<double> w, mu, sd;
    const double wm = (1.0 - best.blend_alpha) / members.size();
    for (double m : members) {
      w.push_back(wm);
      mu.push_back(m);
      sd.push_back(best.kernel_width);
    }
    if (best.blend_alpha > 0.0) {
      for (std::size_t c = 0; c < cm.weights.size(); ++c) {
        w.push_back(best.blend_alpha * cm.weights[c]);
        mu.push_back(cm.means[c]);
        sd.push_back(cm.sds[c]);
      }
    }
    ForecastRecord rec;
    rec.time_index = i;
    rec.observation = data.observations[static_cast<std::size_t>(i)];
    rec.forecast = ForecastDistribution::gaussian_mixture(std::move(w), std::move(mu),
                                                          std::move(sd));
    rec.metadata["scenario"] = "circuit";
    records.push_back(std::move(rec));
  }

  if (dressing_out) *dressing_out = best;
  if (climatology_out) *climatology_out = Climatology{clim};
  return ForecastObservationArchive(std::move(records));
}

ForecastObservationArchive make_enso_like_foa(const EnsoLikeConfig& config,
                                              std::uint64_t seed, BmaModel* bma_out) {
  const std::size_t models = config.ensemble_sizes.size();
  if (models == 0 || config.model_biases.size() != models ||
      config.member_noise_sds.size() != models)
    throw Error("make_enso_like_foa: per-model arrays must be matched and nonempty");
  if (config.n_cases <= config.train_window + 20)
    throw Error("make_enso_like_foa: n_cases too small for the training window");

  std::mt19937_64 rng = rng_for(seed, 0);
  std::normal_distribution<double> unit(0.0, 1.0);

  const std::size_t n = static_cast<std::size_t>(config.n_cases);
  std::vector<double> signal(n), obs(n), shared(n);
  double a1 = 0.0, a2 = 0.0, d = 0.0;
  for (std::size_t t = 0; t < n; ++t) {
    const double anom = config.ar1 * a1 + config.ar2 * a2 +
                        config.anomaly_noise_sd * unit(rng);
    a2 = a1;
    a1 = anom;
    signal[t] = config.seasonal_amplitude *
                    std::sin(2.0 * M_PI * static_cast<double>(t) / 12.0) +
                anom;
    obs[t] = signal[t] + config.obs_noise_sd * unit(rng);
    d = config.shared_error_rho * d +
        config.shared_error_sd * std::sqrt(1.0 - config.shared_error_rho * config.shared_error_rho) *
            unit(rng);
    shared[t] = d;
  }

  std::vector<MultiModelEnsemble> ensembles(n);
  for (std::size_t t = 0; t < n; ++t) {
    ensembles[t].resize(models);
    for (std::size_t k = 0; k < models; ++k) {
      auto& mem = ensembles[t][k];
      mem.resize(static_cast<std::size_t>(config.ensemble_sizes[k]));
      for (double& v : mem) {
        v = signal[t] + config.model_biases[k] + shared[t] +
            config.member_noise_sds[k] * unit(rng);
      }
    }
  }

  const std::size_t w = static_cast<std::size_t>(config.train_window);
  std::vector<MultiModelEnsemble> train_e(ensembles.begin(), ensembles.begin() + w);
  std::vector<double> train_o(obs.begin(), obs.begin() + w);
  BmaModel bma = bma_em_fit(train_e, train_o);

  std::vector<ForecastRecord> records;
  records.reserve(n - w);
  for (std::size_t t = w; t < n; ++t) {
    ForecastRecord rec;
    rec.time_index = static_cast<std::int64_t>(t);
    rec.observation = obs[t];
    rec.forecast = bma_forecast(bma, ensembles[t]);
    rec.metadata["scenario"] = "enso-like";
    records.push_back(std::move(rec));
  }
  if (bma_out) *bma_out = bma;
  return ForecastObservationArchive(std::move(records));
}

}  // namespace recal
