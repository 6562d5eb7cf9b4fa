#include "recal/cli.hpp"

#include <nlohmann/json.hpp>

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <memory>

#include "recal/io.hpp"
#include "recal/recalibrate.hpp"
#include "recal/synth.hpp"

namespace recal::cli {

using nlohmann::json;

namespace {

int log_level() {
  static const int level = [] {
    const char* env = std::getenv("RECAL_LOG");
    if (!env) return 1;
    const std::string v(env);
    if (v == "error") return 0;
    if (v == "warn") return 1;
    if (v == "info") return 2;
    if (v == "debug") return 3;
    return 1;
  }();
  return level;
}

std::string fmt17(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

}  // namespace

void log_warn(const std::string& msg) {
  if (log_level() >= 1) std::cerr << "[warn] " << msg << '\n';
}

void log_info(const std::string& msg) {
  if (log_level() >= 2) std::cerr << "[info] " << msg << '\n';
}

int cmd_pit(const PitArgs& args) {
  const auto archive = read_foa(args.foa_path);
  const auto series = pit(archive);
  if (series.clamped_low() + series.clamped_high() > 0) {
    log_warn(std::to_string(series.clamped_low() + series.clamped_high()) +
             " PIT values clamped away from {0,1}");
  }
  write_pit_csv(args.out_path, series);
  return 0;
}

int cmd_thin(const ThinArgs& args) {
  const auto series = read_pit_csv(args.pit_path);
  const auto report = autocorrelation(series, args.max_lag);
  write_acf_csv(args.out_prefix + ".acf.csv", report);
  int factor = args.factor > 0 ? args.factor : report.suggested_factor;
  if (args.factor > 0 && args.factor < report.suggested_factor) {
    log_warn("thinning factor " + std::to_string(args.factor) +
             " overrides the suggested factor " +
             std::to_string(report.suggested_factor) +
             "; residual correlations may compromise the fit");
  }
  write_pit_csv(args.out_prefix + ".pit.csv", thin(series, factor, args.offset));
  log_info("thinned by factor " + std::to_string(factor));
  return 0;
}

int cmd_fit(const FitArgs& args) {
  const auto series = read_pit_csv(args.pit_path);
  const auto binned = bin_pit(series, args.target_count);
  const auto fit = fit_hyperparams(binned);
  if (!fit.converged) log_warn("hyperparameter search did not converge; using best-seen");
  const auto model = posterior(binned, fit.theta, fit.l0, args.grid);
  write_model(args.out_model, model, args.cov_path);

  const auto stem = std::filesystem::path(args.out_model).stem().string();
  const auto dir = std::filesystem::path(args.out_model).parent_path();
  const auto gain_path = (dir / (stem + ".gain.json")).string();
  json j;
  j["ei_bits"] = model.report.ei;
  j["delta_s_bar_bits"] = model.report.delta_s_bar;
  j["var_delta_s_bits2"] = model.report.var_delta_s;
  j["fam"] = std::isfinite(model.report.fam) ? json(model.report.fam) : json(nullptr);
  j["bins"] = model.report.bins;
  j["samples"] = model.report.samples;
  j["ei_asymptote"] = model.report.ei_asymptote;
  j["objective"] = fit.objective;
  j["converged"] = fit.converged;
  std::ofstream(gain_path) << j.dump(2) << '\n';
  return 0;
}

int cmd_recalibrate(const RecalibrateArgs& args) {
  const auto archive = read_foa(args.foa_path);
  auto model = std::make_shared<const GpmeModel>(read_model(args.model_path));
  std::vector<ForecastRecord> out;
  out.reserve(archive.size());
  for (const auto& rec : archive.records()) {
    const auto it = rec.metadata.find("recalibrated");
    const bool again = it != rec.metadata.end() && it->second == "true";
    if (again)
      log_warn("record t=" + std::to_string(rec.time_index) +
               " is already recalibrated; recalibrating again");
    const auto recal = recalibrate(rec.forecast, model, again);
    ForecastRecord r;
    r.time_index = rec.time_index;
    r.observation = rec.observation;
    r.forecast = recal.to_grid_distribution(args.grid_points, {rec.observation});
    r.metadata = rec.metadata;
    r.metadata["recalibrated"] = "true";
    out.push_back(std::move(r));
  }
  write_foa(args.out_path, ForecastObservationArchive(std::move(out)));
  return 0;
}

int cmd_game(const GameArgs& args) {
  const auto archive = read_foa(args.foa_path);
  const auto model = read_model(args.model_path);
  const auto summary = play(archive, model);
  write_game_csv(args.out_prefix + ".csv", summary);
  write_game_summary_json(args.out_prefix + ".summary.json", summary);
  return 0;
}

int cmd_simulate(const SimulateArgs& args) {
  json scenario;
  {
    std::ifstream in(args.scenario_path);
    if (!in) throw Error("cannot open scenario: " + args.scenario_path);
    try {
      scenario = json::parse(in);
    } catch (const json::exception& e) {
      throw ParseError(args.scenario_path + ": " + e.what(), 0);
    }
  }
  const std::string type = scenario.value("type", "");
  if (type == "gaussian-pair") {
    GaussianPairScenario s;
    s.truth_mean = scenario.value("truth_mean", s.truth_mean);
    s.truth_sd = scenario.value("truth_sd", s.truth_sd);
    s.forecast_mean = scenario.value("forecast_mean", s.forecast_mean);
    s.forecast_sd = scenario.value("forecast_sd", s.forecast_sd);
    const long n = args.n > 0 ? args.n : scenario.value("n", 4096L);
    write_foa(args.out_path, gaussian_pair_foa(s, n, args.seed));
    return 0;
  }
  if (type == "circuit") {
    EnsembleForecastConfig c;
    c.ensemble_size = scenario.value("ensemble_size", c.ensemble_size);
    c.perturbation_sd = scenario.value("perturbation_sd", c.perturbation_sd);
    c.lead_steps = scenario.value("lead_steps", c.lead_steps);
    c.dt = scenario.value("dt", c.dt);
    c.truth_R = scenario.value("truth_R", c.truth_R);
    c.truth_Gamma = scenario.value("truth_Gamma", c.truth_Gamma);
    c.model_R = scenario.value("model_R", c.model_R);
    c.model_Gamma = scenario.value("model_Gamma", c.model_Gamma);
    c.decorrelation_stride = scenario.value("decorrelation_stride", c.decorrelation_stride);
    const long n = args.n > 0 ? args.n : scenario.value("n", 2048L);
    CircuitDressing dressing;
    write_foa(args.out_path, make_circuit_foa(c, n, args.seed, &dressing));
    log_info("circuit dressing: sigma_k=" + fmt17(dressing.kernel_width) +
             " alpha=" + fmt17(dressing.blend_alpha));
    return 0;
  }
  if (type == "enso-like") {
    EnsoLikeConfig c;
    c.n_cases = args.n > 0 ? args.n + c.train_window : scenario.value("n_cases", c.n_cases);
    c.train_window = scenario.value("train_window", c.train_window);
    if (scenario.contains("ensemble_sizes"))
      c.ensemble_sizes = scenario.at("ensemble_sizes").get<std::vector<int>>();
    if (scenario.contains("model_biases"))
      c.model_biases = scenario.at("model_biases").get<std::vector<double>>();
    if (scenario.contains("member_noise_sds"))
      c.member_noise_sds = scenario.at("member_noise_sds").get<std::vector<double>>();
    c.shared_error_sd = scenario.value("shared_error_sd", c.shared_error_sd);
    c.shared_error_rho = scenario.value("shared_error_rho", c.shared_error_rho);
    c.obs_noise_sd = scenario.value("obs_noise_sd", c.obs_noise_sd);
    write_foa(args.out_path, make_enso_like_foa(c, args.seed));
    return 0;
  }
  throw Error("simulate: unknown scenario type \"" + type + "\"");
}

int cmd_report(const ReportArgs& args) {
  const auto model = read_model(args.model_path);
  std::filesystem::create_directories(args.out_dir);
  const std::filesystem::path dir(args.out_dir);

  {
    std::ofstream out(dir / "pit_hist_raw.csv");
    out << "edge_lo,edge_hi,count,density\n";
    const double n = static_cast<double>(model.binned.total);
    for (int v = 0; v < model.binned.size(); ++v) {
      out << fmt17(model.binned.edges[v]) << ',' << fmt17(model.binned.edges[v + 1])
          << ',' << model.binned.counts[v] << ','
          << fmt17(model.binned.counts[v] / (n * model.binned.widths[v])) << '\n';
    }
  }
  {
    std::ofstream out(dir / "density_curve.csv");
    out << "f,pi_hat,c_diag\n";
    for (int i = 0; i < model.grid_size(); ++i)
      out << fmt17(model.grid[i]) << ',' << fmt17(model.density[i]) << ','
          << fmt17(model.var_diag[i]) << '\n';
  }
  {
    std::ofstream out(dir / "gain.csv");
    out << "n,bins,ei,delta_s_bar,var_delta_s,fam,ei_asymptote\n";
    const auto& r = model.report;
    out << r.samples << ',' << r.bins << ',' << fmt17(r.ei) << ','
        << fmt17(r.delta_s_bar) << ',' << fmt17(r.var_delta_s) << ','
        << fmt17(r.fam) << ',' << fmt17(r.ei_asymptote) << '\n';
  }

  if (!args.game_path.empty()) {
    std::ifstream in(args.game_path);
    if (!in) throw Error("cannot open game CSV: " + args.game_path);
    std::string line;
    std::getline(in, line);
    if (line.rfind("t,x,f,w", 0) != 0)
      throw ParseError(args.game_path + ":1: expected header \"t,x,f,w\"", 1);
    std::vector<double> fs, ws;
    std::size_t lineno = 1;
    while (std::getline(in, line)) {
      ++lineno;
      if (line.empty()) continue;
      double x, f, wv;
      long long t;
      if (std::sscanf(line.c_str(), "%lld,%lf,%lf,%lf", &t, &x, &f, &wv) != 4)
        throw ParseError(args.game_path + ":" + std::to_string(lineno) + ": bad row",
                         lineno);
      fs.push_back(f);
      ws.push_back(wv);
    }
    if (ws.empty()) throw Error("report: game CSV has no rounds");

    // Recalibrated test PIT through the cumulative of the fitted density.
    std::vector<double> gt(model.grid.size(), 0.0);
    for (std::size_t i = 1; i < gt.size(); ++i)
      gt[i] = gt[i - 1] + 0.5 * (model.density[i] + model.density[i - 1]) *
                              (model.grid[i] - model.grid[i - 1]);
    for (double& g : gt) g /= gt.back();
    auto gtilde = [&](double f) {
      const auto it = std::upper_bound(model.grid.begin(), model.grid.end(), f);
      std::size_t i = std::clamp<std::size_t>(
          static_cast<std::size_t>(it - model.grid.begin()), 1, gt.size() - 1);
      const double t = (f - model.grid[i - 1]) / (model.grid[i] - model.grid[i - 1]);
      return gt[i - 1] + t * (gt[i] - gt[i - 1]);
    };

    constexpr int kPitBins = 20;
    std::vector<long> raw(kPitBins, 0), recal(kPitBins, 0);
    for (double f : fs) {
      const int b = std::clamp(static_cast<int>(f * kPitBins), 0, kPitBins - 1);
      const int g = std::clamp(static_cast<int>(gtilde(f) * kPitBins), 0, kPitBins - 1);
      ++raw[b];
      ++recal[g];
    }
    {
      std::ofstream out(dir / "pit_hist_test.csv");
      out << "edge_lo,edge_hi,count_raw,count_recalibrated\n";
      for (int b = 0; b < kPitBins; ++b) {
        out << fmt17(b / static_cast<double>(kPitBins)) << ','
            << fmt17((b + 1) / static_cast<double>(kPitBins)) << ',' << raw[b] << ','
            << recal[b] << '\n';
      }
    }
    {
      const auto [wmin, wmax] = std::minmax_element(ws.begin(), ws.end());
      const double pad = 1e-9 * std::max(1.0, *wmax - *wmin);
      const double lo = *wmin - pad, hi = *wmax + pad;
      constexpr int kBins = 40;
      std::vector<long> counts(kBins, 0);
      for (double wv : ws)
        ++counts[std::clamp(static_cast<int>((wv - lo) / (hi - lo) * kBins), 0, kBins - 1)];
      const double band = std::sqrt(std::max(model.report.var_delta_s, 0.0));
      std::ofstream out(dir / "winnings_hist.csv");
      out << "edge_lo,edge_hi,count,delta_s_bar,band_lo,band_hi\n";
      for (int b = 0; b < kBins; ++b) {
        out << fmt17(lo + (hi - lo) * b / kBins) << ','
            << fmt17(lo + (hi - lo) * (b + 1) / kBins) << ',' << counts[b] << ','
            << fmt17(model.report.delta_s_bar) << ','
            << fmt17(model.report.delta_s_bar - band) << ','
            << fmt17(model.report.delta_s_bar + band) << '\n';
      }
    }
  }
  return 0;
}

}  // namespace recal::cli
