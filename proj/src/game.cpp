#include "recal/game.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "recal/math.hpp"

namespace recal {

GameSummary play(const ForecastObservationArchive& archive_test, const GpmeModel& model) {
  if (archive_test.empty()) throw Error("play: test archive is empty");
  const auto t_first = archive_test.records().front().time_index;
  const auto t_last = archive_test.records().back().time_index;
  if (t_first <= model.binned.t_max && t_last >= model.binned.t_min) {
    std::ostringstream os;
    os << "play: test range [" << t_first << ", " << t_last
       << "] overlaps training range [" << model.binned.t_min << ", "
       << model.binned.t_max << "]";
    throw Error(os.str());
  }

  GameSummary s;
  s.rounds.reserve(archive_test.size());
  double sum = 0.0;
  for (const auto& rec : archive_test.records()) {
    double f = rec.forecast.cdf(rec.observation);
    f = std::clamp(f, 1e-12, 1.0 - 1e-12);
    GameRound round;
    round.time_index = rec.time_index;
    round.observation = rec.observation;
    round.pit_value = f;
    round.winnings = log2_of(predictive_density(model, f));
    sum += round.winnings;
    s.rounds.push_back(round);
  }
  const double n = static_cast<double>(s.rounds.size());
  s.mean_winnings = sum / n;
  s.kelly_wealth_log2 = sum;

  double ss = 0.0;
  for (const auto& r : s.rounds) {
    const double d = r.winnings - s.mean_winnings;
    ss += d * d;
  }
  s.sample_sd = (s.rounds.size() > 1) ? std::sqrt(ss / (n - 1.0)) : 0.0;

  // 40 equal-width bins padded by epsilon so extremes land inside.
  const auto [wmin, wmax] = std::minmax_element(
      s.rounds.begin(), s.rounds.end(),
      [](const GameRound& a, const GameRound& b) { return a.winnings < b.winnings; });
  const double pad = 1e-9 * std::max(1.0, std::abs(wmax->winnings - wmin->winnings));
  const double lo = wmin->winnings - pad, hi = wmax->winnings + pad;
  constexpr int kBins = 40;
  s.histogram.edges = linspace(lo, hi, kBins + 1);
  s.histogram.counts.assign(kBins, 0);
  for (const auto& r : s.rounds) {
    int b = static_cast<int>((r.winnings - lo) / (hi - lo) * kBins);
    b = std::clamp(b, 0, kBins - 1);
    ++s.histogram.counts[b];
  }

  s.predicted = model.report;
  return s;
}

double kelly_wealth_factor(const GameSummary& summary) {
  if (summary.rounds.empty()) throw Error("kelly_wealth_factor: empty summary");
  return std::exp2(summary.mean_winnings);
}

PredictionCheck prediction_check(const GameSummary& summary) {
  if (summary.rounds.empty()) throw Error("prediction_check: empty summary");
  const double n = static_cast<double>(summary.rounds.size());
  const double combined = summary.predicted.var_delta_s +
                          summary.sample_sd * summary.sample_sd / n;
  PredictionCheck c;
  const double diff = summary.mean_winnings - summary.predicted.delta_s_bar;
  if (combined > 0.0) {
    c.z = diff / std::sqrt(combined);
  } else {
    c.z = (diff == 0.0) ? 0.0 : std::numeric_limits<double>::infinity();
  }
  c.pass = std::abs(c.z) <= 3.0;
  return c;
}

}  // namespace recal
