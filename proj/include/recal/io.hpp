#pragma once

#include <string>

#include "recal/archive.hpp"
#include "recal/game.hpp"
#include "recal/gpme.hpp"
#include "recal/thinning.hpp"

namespace recal {

/// FOA files are JSON-lines, one record per line:
///   {"t": int, "x": float, "forecast": {"type": "gmm", "w": [...], "mu": [...],
///    "sigma": [...]} | {"type": "grid", "xs": [...], "cdf": [...]}, "meta": {...}}
/// Parse failures name the offending 1-based line.
ForecastObservationArchive read_foa(const std::string& path);
void write_foa(const std::string& path, const ForecastObservationArchive& archive);

/// PIT CSV with header "t,f"; floats carry 17 significant digits.
void write_pit_csv(const std::string& path, const PitSeries& series);
PitSeries read_pit_csv(const std::string& path);

/// ACF report CSV with header "lag,acf,band".
void write_acf_csv(const std::string& path, const AcfReport& report);

/// Game results CSV with header "t,x,f,w" plus a summary JSON embedding the
/// GainReport and the prediction verdict.
void write_game_csv(const std::string& path, const GameSummary& summary);
void write_game_summary_json(const std::string& path, const GameSummary& summary);

/// Model persistence. The full grid covariance goes to an optional binary
/// sidecar (row-major float64, M x M, little-endian) referenced by filename
/// in the JSON document; without it a reloaded model cannot recompute
/// Var(DeltaS) but keeps the stored GainReport.
void write_model(const std::string& path, const GpmeModel& model,
                 const std::string& cov_sidecar = "");
GpmeModel read_model(const std::string& path);

}  // namespace recal
