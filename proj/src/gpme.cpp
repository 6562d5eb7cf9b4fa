#include "recal/gpme.hpp"

#include <algorithm>
#include <cmath>
#include <future>
#include <limits>
#include <thread>

#include "recal/math.hpp"
#include "nelder_mead.hpp"

namespace recal {

const Kernel& default_kernel() {
  static const SquaredExponentialKernel k;
  return k;
}

LaplaceResiduals laplace_residuals(long n) {
  if (n < 1) throw Error("laplace_residuals: n must be >= 1");
  const double nd = static_cast<double>(n);
  const double rt = std::sqrt(nd);
  const double ln_n = std::log(nd);

  // ln of the (unnormalised) Poisson likelihood e^-mu mu^n, minus its
  // second-order expansion about the mode, evaluated at the +-1 sigma
  // points of the expansion.
  auto r1_at = [&](double mu) {
    const double exact = -mu + nd * std::log(mu);
    const double approx = -nd + nd * ln_n - (mu - nd) * (mu - nd) / (2.0 * nd);
    return exact - approx;
  };
  auto r2_at = [&](double l) {
    const double exact = -std::exp(l) + nd * l;
    const double approx = -nd + nd * ln_n - 0.5 * nd * (l - ln_n) * (l - ln_n);
    return exact - approx;
  };

  LaplaceResiduals r;
  r.r1_plus = r1_at(nd + rt);
  r.r1_minus = (n == 1) ? -std::numeric_limits<double>::infinity() : r1_at(nd - rt);
  r.r2_plus = r2_at(ln_n + 1.0 / rt);
  r.r2_minus = r2_at(ln_n - 1.0 / rt);
  return r;
}

namespace {

constexpr double kJitterStart = 1e-12;
constexpr double kJitterMax = 1e-4;

struct Factorized {
  Eigen::LLT<Eigen::MatrixXd> llt;
  double jitter = 0.0;
  double log_det = 0.0;
  bool ok = false;
};

Eigen::MatrixXd gram(const BinnedPit& b, const KernelParams& theta, const Kernel& kernel) {
  const int n = b.size();
  Eigen::MatrixXd q(n, n);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j <= i; ++j) {
      const double v = kernel(b.centers[i], b.centers[j], theta);
      q(i, j) = v;
      q(j, i) = v;
    }
  }
  return q;
}

// Cholesky of Q + D with jitter escalation 0, 1e-12, 1e-11, ..., 1e-4.
Factorized factor(const BinnedPit& b, const KernelParams& theta, const Kernel& kernel) {
  const int n = b.size();
  Eigen::MatrixXd m = gram(b, theta, kernel);
  for (int i = 0; i < n; ++i) m(i, i) += b.noise_var[i];

  Factorized f;
  double jitter = std::max(theta.jitter, 0.0);
  while (true) {
    Eigen::MatrixXd mj = m;
    if (jitter > 0.0) mj.diagonal().array() += jitter;
    f.llt.compute(mj);
    if (f.llt.info() == Eigen::Success) {
      f.jitter = jitter;
      f.log_det = 2.0 * f.llt.matrixLLT().diagonal().array().log().sum();
      f.ok = std::isfinite(f.log_det);
      if (f.ok) return f;
    }
    if (jitter >= kJitterMax) break;
    jitter = (jitter == 0.0) ? kJitterStart : jitter * 10.0;
  }
  f.ok = false;
  return f;
}

Eigen::VectorXd to_vec(const std::vector<double>& v) {
  return Eigen::Map<const Eigen::VectorXd>(v.data(), static_cast<long>(v.size()));
}

double objective_impl(const BinnedPit& b, const Factorized& f) {
  const Eigen::VectorXd l1 = to_vec(b.log_rate);
  const Eigen::VectorXd u = Eigen::VectorXd::Ones(b.size());
  const Eigen::VectorXd a = f.llt.solve(l1);
  const Eigen::VectorXd g = f.llt.solve(u);
  const double lg = l1.dot(g);
  const double ug = u.dot(g);
  return f.log_det + l1.dot(a) - lg * lg / ug;
}

}  // namespace

double objective(const BinnedPit& binned, const KernelParams& theta, const Kernel& kernel) {
  const Factorized f = factor(binned, theta, kernel);
  if (!f.ok) return std::numeric_limits<double>::infinity();
  return objective_impl(binned, f);
}

double l0_mle(const BinnedPit& binned, const KernelParams& theta, const Kernel& kernel) {
  const Factorized f = factor(binned, theta, kernel);
  if (!f.ok) throw Error("l0_mle: Q+D is numerically singular at maximum jitter");
  const Eigen::VectorXd l1 = to_vec(binned.log_rate);
  const Eigen::VectorXd u = Eigen::VectorXd::Ones(binned.size());
  const Eigen::VectorXd g = f.llt.solve(u);
  return l1.dot(g) / u.dot(g);
}

FitResult fit_hyperparams(const BinnedPit& binned, const SearchConfig& config,
                          const Kernel& kernel) {
  const int s = config.starts_per_axis;
  const detail::Point2 lo{config.ln_amp_min, config.ln_scale_min};
  const detail::Point2 hi{config.ln_amp_max, config.ln_scale_max};

  auto eval = [&](const detail::Point2& p) {
    KernelParams t{std::exp(p[0]), std::exp(p[1]), 0.0};
    return objective(binned, t, kernel);
  };

  std::vector<detail::Point2> starts;
  starts.reserve(static_cast<std::size_t>(s) * s);
  for (int i = 0; i < s; ++i) {
    for (int j = 0; j < s; ++j) {
      starts.push_back({lo[0] + (hi[0] - lo[0]) * (i + 0.5) / s,
                        lo[1] + (hi[1] - lo[1]) * (j + 0.5) / s});
    }
  }

  auto run_start = [&](const detail::Point2& x0) {
    const auto nm = detail::nelder_mead_2d(eval, x0, 0.5, config.tolerance,
                                           config.max_iterations, lo, hi);
    StartResult r;
    r.start = KernelParams{std::exp(x0[0]), std::exp(x0[1]), 0.0};
    r.found = KernelParams{std::exp(nm.x[0]), std::exp(nm.x[1]), 0.0};
    r.objective = nm.fx;
    r.iterations = nm.iterations;
    r.converged = nm.converged && std::isfinite(nm.fx);
    return r;
  };

  FitResult out;
  out.starts.resize(starts.size());
  const unsigned workers = std::max(1u, std::thread::hardware_concurrency());
  if (config.parallel && workers > 1 && starts.size() > 1) {
    std::vector<std::future<StartResult>> futs;
    futs.reserve(starts.size());
    for (const auto& x0 : starts)
      futs.push_back(std::async(std::launch::async, run_start, x0));
    for (std::size_t i = 0; i < futs.size(); ++i) out.starts[i] = futs[i].get();
  } else {
    for (std::size_t i = 0; i < starts.size(); ++i) out.starts[i] = run_start(starts[i]);
  }

  std::size_t best = 0;
  for (std::size_t i = 1; i < out.starts.size(); ++i) {
    if (out.starts[i].objective < out.starts[best].objective) best = i;
  }
  out.theta = out.starts[best].found;
  out.objective = out.starts[best].objective;
  out.converged = out.starts[best].converged;
  if (!std::isfinite(out.objective))
    throw Error("fit_hyperparams: objective non-finite at every start");
  out.l0 = l0_mle(binned, out.theta, kernel);
  return out;
}

GpmeModel posterior(const BinnedPit& binned, const KernelParams& theta, double l0,
                    int grid_size, const Kernel& kernel) {
  if (grid_size < 8) throw Error("posterior: grid_size must be >= 8");
  const Factorized f = factor(binned, theta, kernel);
  if (!f.ok) throw Error("posterior: Q+D is numerically singular at maximum jitter");

  const int nb = binned.size();
  const Eigen::VectorXd l1 = to_vec(binned.log_rate);
  const Eigen::VectorXd u = Eigen::VectorXd::Ones(nb);
  const Eigen::VectorXd alpha = f.llt.solve(l1 - l0 * u);

  GpmeModel m;
  m.binned = binned;
  m.theta = theta;
  m.theta.jitter = f.jitter;
  m.l0 = l0;
  m.grid = linspace(0.0, 1.0, static_cast<std::size_t>(grid_size));

  // Cross-covariance between training centers and the prediction grid.
  Eigen::MatrixXd k(nb, grid_size);
  for (int v = 0; v < nb; ++v)
    for (int a = 0; a < grid_size; ++a) k(v, a) = kernel(binned.centers[v], m.grid[a], theta);

  const Eigen::VectorXd lambda = k.transpose() * alpha;
  Eigen::MatrixXd cov(grid_size, grid_size);
  for (int a = 0; a < grid_size; ++a)
    for (int c = 0; c <= a; ++c) {
      const double v = kernel(m.grid[a], m.grid[c], theta);
      cov(a, c) = v;
      cov(c, a) = v;
    }
  const Eigen::MatrixXd w = f.llt.solve(k);
  cov.noalias() -= k.transpose() * w;
  cov = 0.5 * (cov + cov.transpose()).eval();

  m.mean_log.resize(grid_size);
  m.var_diag.resize(grid_size);
  for (int a = 0; a < grid_size; ++a) {
    m.mean_log[a] = l0 + lambda(a);
    m.var_diag[a] = std::max(cov(a, a), 0.0);
    cov(a, a) = m.var_diag[a];
  }
  m.cov = std::move(cov);

  // Normalisation over the training bins: A = sum_v omega_v exp(lambda_v + C_vv/2).
  const Eigen::MatrixXd q = gram(binned, theta, kernel);
  const Eigen::VectorXd lambda_c = q * alpha;
  const Eigen::MatrixXd wq = f.llt.solve(q);
  m.a_norm = 0.0;
  for (int v = 0; v < nb; ++v) {
    const double cvv = std::max(q(v, v) - q.row(v).dot(wq.col(v)), 0.0);
    m.a_norm += binned.widths[v] * std::exp(l0 + lambda_c(v) + 0.5 * cvv);
  }

  m.density.resize(grid_size);
  for (int a = 0; a < grid_size; ++a)
    m.density[a] = std::exp(m.mean_log[a] + 0.5 * m.var_diag[a]) / m.a_norm;
  const double h = 1.0 / (grid_size - 1);
  m.renorm_correction = trapezoid(m.density, h);
  if (!(m.renorm_correction > 0.0) || !std::isfinite(m.renorm_correction))
    throw Error("posterior: predictive density has non-finite mass");
  m.log_density.resize(grid_size);
  for (int a = 0; a < grid_size; ++a) {
    m.density[a] /= m.renorm_correction;
    m.log_density[a] = std::log(m.density[a]);
  }
  m.log_density_interp = std::make_shared<MonotoneCubic>(m.grid, m.log_density);

  m.report = gain_report(m);
  return m;
}

double predictive_density(const GpmeModel& model, double f) {
  if (!(f >= 0.0 && f <= 1.0)) throw Error("predictive_density: f outside [0,1]");
  if (model.log_density_interp) return std::exp((*model.log_density_interp)(f));
  return std::exp(MonotoneCubic(model.grid, model.log_density)(f));
}

double ei(const GpmeModel& model) {
  const int n = model.grid_size();
  std::vector<double> y(n);
  for (int i = 0; i < n; ++i) y[i] = model.density[i] * model.var_diag[i];
  const double nats = 0.5 * trapezoid(y, 1.0 / (n - 1));
  return std::max(nats * kLog2E, 0.0);
}

double delta_s_bar(const GpmeModel& model) {
  const int n = model.grid_size();
  std::vector<double> y(n);
  for (int i = 0; i < n; ++i)
    y[i] = model.density[i] * model.log_density[i] * kLog2E;
  return std::max(trapezoid(y, 1.0 / (n - 1)), 0.0);
}

double var_delta_s(const GpmeModel& model) {
  if (!model.has_cov())
    throw Error("var_delta_s: model carries no grid covariance (load the sidecar)");
  const int n = model.grid_size();
  const double h = 1.0 / (n - 1);
  Eigen::VectorXd gw(n);
  for (int i = 0; i < n; ++i) {
    const double w = (i == 0 || i == n - 1) ? 0.5 * h : h;
    gw(i) = w * model.density[i] * model.log_density[i] * kLog2E;
  }
  const Eigen::MatrixXd e = model.cov.array().exp().matrix() -
                            Eigen::MatrixXd::Ones(n, n);
  return std::max(gw.dot(e * gw), 0.0);
}

std::optional<double> fam(const GpmeModel& model) {
  const double v = model.has_cov() ? var_delta_s(model) : model.report.var_delta_s;
  if (!(v > 0.0)) return std::nullopt;
  return delta_s_bar(model) / std::sqrt(v);
}

double delta_s_true(const GpmeModel& model,
                    const std::function<double(double)>& true_density) {
  const int n = model.grid_size();
  std::vector<double> y(n);
  for (int i = 0; i < n; ++i)
    y[i] = true_density(model.grid[i]) * model.log_density[i] * kLog2E;
  return trapezoid(y, 1.0 / (n - 1));
}

GainReport gain_report(const GpmeModel& model) {
  GainReport r;
  r.ei = ei(model);
  r.delta_s_bar = delta_s_bar(model);
  r.var_delta_s = model.has_cov() ? var_delta_s(model) : model.report.var_delta_s;
  r.fam = (r.var_delta_s > 0.0) ? r.delta_s_bar / std::sqrt(r.var_delta_s)
                                : std::numeric_limits<double>::quiet_NaN();
  r.bins = model.binned.size();
  r.samples = model.binned.total;
  r.ei_asymptote = static_cast<double>(r.bins) / (2.0 * static_cast<double>(r.samples));
  return r;
}

BinPosteriorForms bin_posterior_forms(const BinnedPit& binned, const KernelParams& theta,
                                      double l0, const Kernel& kernel) {
  const Factorized f = factor(binned, theta, kernel);
  if (!f.ok) throw Error("bin_posterior_forms: Q+D numerically singular");
  const int nb = binned.size();
  const Eigen::VectorXd l1 = to_vec(binned.log_rate);
  const Eigen::VectorXd u = Eigen::VectorXd::Ones(nb);
  const Eigen::VectorXd resid = l1 - l0 * u;
  const Eigen::MatrixXd q = gram(binned, theta, kernel);
  const Eigen::VectorXd dvec = to_vec(binned.noise_var);

  BinPosteriorForms out;
  out.mean_primary = l0 * u + q * f.llt.solve(resid);
  out.mean_dual = l1 - dvec.asDiagonal() * f.llt.solve(resid);
  out.cov_primary = q - q * f.llt.solve(q);
  const Eigen::MatrixXd dmat = dvec.asDiagonal();
  out.cov_dual = dmat - dmat * f.llt.solve(dmat);
  return out;
}

GpmeModel fit_pit_model(const PitSeries& series, int target_count, int grid_size,
                        const SearchConfig& config) {
  const BinnedPit b = bin_pit(series, target_count);
  const FitResult fit = fit_hyperparams(b, config);
  return posterior(b, fit.theta, fit.l0, grid_size);
}

}  // namespace recal
