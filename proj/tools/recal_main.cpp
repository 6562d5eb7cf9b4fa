#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include <iostream>

#include "recal/cli.hpp"
#include "recal/math.hpp"

namespace {

int report_error(const std::exception& e) {
  nlohmann::json j;
  j["error"] = "error";
  j["message"] = e.what();
  if (const auto* pe = dynamic_cast<const recal::ParseError*>(&e)) {
    j["error"] = "parse";
    if (pe->line > 0) j["line"] = pe->line;
  } else if (const auto* se = dynamic_cast<const recal::ScoringError*>(&e)) {
    j["error"] = "scoring";
    j["time_index"] = se->time_index;
  }
  std::cerr << j.dump() << '\n';
  return 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Forecast recalibration toolkit"};
  app.require_subcommand(1);

  recal::cli::PitArgs pit_args;
  auto* pit = app.add_subcommand("pit", "Compute PIT values of an FOA");
  pit->add_option("--foa", pit_args.foa_path, "FOA JSONL input")->required();
  pit->add_option("--out", pit_args.out_path, "PIT CSV output")->required();

  recal::cli::ThinArgs thin_args;
  auto* thin = app.add_subcommand("thin", "Autocorrelation analysis and thinning");
  thin->add_option("--pit", thin_args.pit_path, "PIT CSV input")->required();
  thin->add_option("--max-lag", thin_args.max_lag, "maximum ACF lag");
  thin->add_option("--factor", thin_args.factor, "override the suggested factor");
  thin->add_option("--offset", thin_args.offset, "thinning offset");
  thin->add_option("--out", thin_args.out_prefix, "output prefix")->required();

  recal::cli::FitArgs fit_args;
  auto* fit = app.add_subcommand("fit", "Fit the PIT density model");
  fit->add_option("--pit", fit_args.pit_path, "PIT CSV input")->required();
  fit->add_option("--target-count", fit_args.target_count, "mean samples per bin");
  fit->add_option("--grid", fit_args.grid, "prediction grid size");
  fit->add_option("--cov", fit_args.cov_path, "covariance sidecar path");
  fit->add_option("--out", fit_args.out_model, "model JSON output")->required();

  recal::cli::RecalibrateArgs recal_args;
  auto* rc = app.add_subcommand("recalibrate", "Rewrite an FOA's forecasts");
  rc->add_option("--foa", recal_args.foa_path, "FOA JSONL input")->required();
  rc->add_option("--model", recal_args.model_path, "model JSON")->required();
  rc->add_option("--out", recal_args.out_path, "recalibrated FOA output")->required();

  recal::cli::GameArgs game_args;
  auto* game = app.add_subcommand("game", "Play the entropy game out of sample");
  game->add_option("--foa", game_args.foa_path, "test FOA JSONL")->required();
  game->add_option("--model", game_args.model_path, "model JSON")->required();
  game->add_option("--out", game_args.out_prefix, "output prefix")->required();

  recal::cli::SimulateArgs sim_args;
  auto* sim = app.add_subcommand("simulate", "Generate a synthetic FOA");
  sim->add_option("--scenario", sim_args.scenario_path, "scenario JSON")->required();
  sim->add_option("--n", sim_args.n, "number of forecasts");
  sim->add_option("--seed", sim_args.seed, "master seed");
  sim->add_option("--out", sim_args.out_path, "FOA JSONL output")->required();

  recal::cli::ReportArgs rep_args;
  auto* rep = app.add_subcommand("report", "Emit plot-data CSVs");
  rep->add_option("--model", rep_args.model_path, "model JSON")->required();
  rep->add_option("--game", rep_args.game_path, "game CSV (optional)");
  rep->add_option("--out", rep_args.out_dir, "output directory")->required();

  CLI11_PARSE(app, argc, argv);

  try {
    if (pit->parsed()) return recal::cli::cmd_pit(pit_args);
    if (thin->parsed()) return recal::cli::cmd_thin(thin_args);
    if (fit->parsed()) return recal::cli::cmd_fit(fit_args);
    if (rc->parsed()) return recal::cli::cmd_recalibrate(recal_args);
    if (game->parsed()) return recal::cli::cmd_game(game_args);
    if (sim->parsed()) return recal::cli::cmd_simulate(sim_args);
    if (rep->parsed()) return recal::cli::cmd_report(rep_args);
  } catch (const std::exception& e) {
    return report_error(e);
  }
  return 1;
}
