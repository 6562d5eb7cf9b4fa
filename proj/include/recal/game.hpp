#pragma once

#include <cstdint>
#include <vector>

#include "recal/archive.hpp"
#include "recal/gpme.hpp"

namespace recal {

/// One turn of the entropy game: the recalibrated player's winnings are
/// w = log2[p1(x)/p(x)] = log2 pi_hat(f), with f the published forecast's
/// PIT at the observation.
struct GameRound {
  std::int64_t time_index = 0;
  double observation = 0.0;
  double pit_value = 0.0;
  double winnings = 0.0;  // bits, signed
};

struct WinningsHistogram {
  std::vector<double> edges;  // 41 edges for 40 equal-width bins
  std::vector<long> counts;
};

struct GameSummary {
  std::vector<GameRound> rounds;
  double mean_winnings = 0.0;       // bits
  double sample_sd = 0.0;           // bits
  double kelly_wealth_log2 = 0.0;   // cumulative sum of winnings
  WinningsHistogram histogram;
  GainReport predicted;             // from the model that set the wagers
};

/// Plays one round per record of the test archive. Refuses archives whose
/// time range overlaps the model's training range.
GameSummary play(const ForecastObservationArchive& archive_test, const GpmeModel& model);

/// Per-round wealth multiplier of the recalibrated player, 2^mean.
double kelly_wealth_factor(const GameSummary& summary);

/// Prediction vs outcome: z = (mean - dS_bar)/sqrt(Var(dS) + sd^2/N).
/// The sampling term is added because desk-scale test sets are small.
struct PredictionCheck {
  double z = 0.0;
  bool pass = false;  // |z| <= 3
};
PredictionCheck prediction_check(const GameSummary& summary);

}  // namespace recal
