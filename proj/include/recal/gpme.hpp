#pragma once

#include <Eigen/Dense>

#include <functional>
#include <memory>
#include <optional>
#include <vector>

#include "recal/binning.hpp"
#include "recal/kernel.hpp"
#include "recal/math.hpp"

namespace recal {

/// Exact residuals of the Poisson-normal (Laplace) approximation at the
/// +-1 sigma points, in mu-space (R1, at mu = n +- sqrt(n)) and in l-space
/// (R2, at l = ln n +- 1/sqrt(n)). R1 at the -sigma point diverges for
/// n = 1 where the evaluation point hits mu = 0.
struct LaplaceResiduals {
  double r1_plus, r1_minus, r2_plus, r2_minus;
};
LaplaceResiduals laplace_residuals(long n);

/// Fit-gain diagnostics of a fitted model, all entropies in bits.
struct GainReport {
  double ei = 0.0;            // expected KL from the imperfectly known truth
  double delta_s_bar = 0.0;   // predicted mean entropy-game winnings
  double var_delta_s = 0.0;   // epistemic variance of the winnings, bits^2
  double fam = 0.0;           // delta_s_bar / sqrt(var_delta_s); NaN if undefined
  int bins = 0;
  long samples = 0;
  double ei_asymptote = 0.0;  // B/2N reference
};

/// Fitted log-Gaussian Cox model of the PIT density: hyperparameters,
/// posterior mean/covariance evaluated on a uniform prediction grid, and
/// the renormalised predictive density. Immutable after construction.
struct GpmeModel {
  BinnedPit binned;
  KernelParams theta;
  double l0 = 0.0;

  std::vector<double> grid;         // M uniform points on [0,1]
  std::vector<double> mean_log;     // lambda(f) on the grid
  std::vector<double> var_diag;     // C(f,f) on the grid
  std::vector<double> density;      // renormalised predictive density
  std::vector<double> log_density;  // ln density (interpolation table)
  Eigen::MatrixXd cov;              // full C(f_i,f_j); empty if not available

  double a_norm = 0.0;             // normalisation A over training bins
  double renorm_correction = 1.0;  // grid integral divided out afterwards

  GainReport report;

  // Interpolation table for predictive_density; rebuilt on load.
  std::shared_ptr<const MonotoneCubic> log_density_interp;

  bool has_cov() const { return cov.size() > 0; }
  int grid_size() const { return static_cast<int>(grid.size()); }
};

/// Marginal-likelihood objective S(theta) =
///   ln det(Q+D) + l1' (Q+D)^-1 l1 - [l1' (Q+D)^-1 u]^2 / [u' (Q+D)^-1 u].
/// Returns +inf if Q+D cannot be factorized even at maximum jitter.
double objective(const BinnedPit& binned, const KernelParams& theta,
                 const Kernel& kernel = default_kernel());

/// Conditional MLE of the constant mean level:
///   l0~ = l1' (Q+D)^-1 u / u' (Q+D)^-1 u  (a weighted average of l1).
double l0_mle(const BinnedPit& binned, const KernelParams& theta,
              const Kernel& kernel = default_kernel());

struct SearchConfig {
  int starts_per_axis = 4;  // log-spaced multi-start grid
  double ln_amp_min = -9.210340371976182;   // ln 1e-4
  double ln_amp_max = 9.210340371976182;    // ln 1e4
  double ln_scale_min = -4.605170185988091; // ln 0.01
  double ln_scale_max = 2.302585092994046;  // ln 10
  double tolerance = 1e-8;
  int max_iterations = 500;
  bool parallel = true;
};

struct StartResult {
  KernelParams start;
  KernelParams found;
  double objective = 0.0;
  int iterations = 0;
  bool converged = false;
};

struct FitResult {
  KernelParams theta;
  double objective = 0.0;
  double l0 = 0.0;
  bool converged = false;
  std::vector<StartResult> starts;
};

/// Multi-start Nelder-Mead minimisation of S over (ln A, ln sigma) with box
/// constraints. Deterministic. If no start converges within the iteration
/// budget the best-seen point is returned flagged non-converged.
FitResult fit_hyperparams(const BinnedPit& binned, const SearchConfig& config = {},
                          const Kernel& kernel = default_kernel());

/// Evaluates the trained mean lambda(f) and covariance C(f1,f2) on a uniform
/// grid, normalises per the training-bin sum, renormalises the predictive
/// density to unit mass on the grid, and fills the GainReport.
GpmeModel posterior(const BinnedPit& binned, const KernelParams& theta, double l0,
                    int grid_size = 512, const Kernel& kernel = default_kernel());

/// Predictive density at f in [0,1]; cubic interpolation in log-density.
double predictive_density(const GpmeModel& model, double f);

double ei(const GpmeModel& model);
double delta_s_bar(const GpmeModel& model);
double var_delta_s(const GpmeModel& model);  // needs the full grid covariance
/// Undefined (nullopt) when Var(DeltaS) == 0.
std::optional<double> fam(const GpmeModel& model);

/// Realized entropy-game expectation against a known true PIT density
/// (synthetic scenarios): integral of pi_true(f) log2 model_density(f).
double delta_s_true(const GpmeModel& model,
                    const std::function<double(double)>& true_density);

GainReport gain_report(const GpmeModel& model);

/// Both algebraic routes to the posterior at the training bin centers, for
/// identity verification: mean via the trained-function form vs
/// l1 - D (Q+D)^-1 (l1 - l0 u), covariance via the pred form vs
/// D - D (Q+D)^-1 D.
struct BinPosteriorForms {
  Eigen::VectorXd mean_primary, mean_dual;
  Eigen::MatrixXd cov_primary, cov_dual;
};
BinPosteriorForms bin_posterior_forms(const BinnedPit& binned, const KernelParams& theta,
                                      double l0, const Kernel& kernel = default_kernel());

/// Convenience pipeline: bin, fit hyperparameters, build the posterior.
GpmeModel fit_pit_model(const PitSeries& series, int target_count = 8,
                        int grid_size = 512, const SearchConfig& config = {});

}  // namespace recal
