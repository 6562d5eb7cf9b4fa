#pragma once

#include <cstdint>
#include <string>

namespace recal::cli {

/// Fixed default seed used by every subcommand unless --seed is given.
inline constexpr std::uint64_t kDefaultSeed = 1729;

struct PitArgs {
  std::string foa_path, out_path;
};
int cmd_pit(const PitArgs& args);

struct ThinArgs {
  std::string pit_path, out_prefix;
  int max_lag = 50;
  int factor = 0;  // 0 = use the suggested factor
  int offset = 0;
};
int cmd_thin(const ThinArgs& args);

struct FitArgs {
  std::string pit_path, out_model;
  int target_count = 8;
  int grid = 512;
  std::string cov_path;  // optional covariance sidecar
};
int cmd_fit(const FitArgs& args);

struct RecalibrateArgs {
  std::string foa_path, model_path, out_path;
  std::size_t grid_points = 513;
};
int cmd_recalibrate(const RecalibrateArgs& args);

struct GameArgs {
  std::string foa_path, model_path, out_prefix;
};
int cmd_game(const GameArgs& args);

struct SimulateArgs {
  std::string scenario_path, out_path;
  long n = 0;  // 0 = scenario default
  std::uint64_t seed = kDefaultSeed;
};
int cmd_simulate(const SimulateArgs& args);

struct ReportArgs {
  std::string model_path, game_path, out_dir;
};
int cmd_report(const ReportArgs& args);

/// Log levels selected by the RECAL_LOG environment variable
/// (error|warn|info|debug); default warn.
void log_warn(const std::string& msg);
void log_info(const std::string& msg);

}  // namespace recal::cli
