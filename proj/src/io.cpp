#include "recal/io.hpp"

#include <nlohmann/json.hpp>

#include <bit>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <limits>
#include <sstream>

#include "recal/math.hpp"

namespace recal {

using nlohmann::json;

namespace {

static_assert(std::endian::native == std::endian::little,
              "covariance sidecar assumes a little-endian host");

std::string fmt17(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

std::ofstream open_out(const std::string& path) {
  std::ofstream out(path);
  if (!out) throw Error("cannot open for writing: " + path);
  return out;
}

std::ifstream open_in(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open for reading: " + path);
  return in;
}

json forecast_to_json(const ForecastDistribution& d) {
  json j;
  if (d.is_mixture()) {
    const auto& m = d.mixture();
    j["type"] = "gmm";
    j["w"] = m.weights;
    j["mu"] = m.means;
    j["sigma"] = m.sds;
  } else {
    const auto& g = d.grid();
    j["type"] = "grid";
    j["xs"] = g.xs;
    j["cdf"] = g.cdf;
  }
  return j;
}

ForecastDistribution forecast_from_json(const json& j, std::size_t line) {
  if (!j.is_object() || !j.contains("type"))
    throw ParseError("forecast object missing \"type\"", line);
  const std::string type = j.at("type").get<std::string>();
  try {
    if (type == "gmm") {
      return ForecastDistribution::gaussian_mixture(
          j.at("w").get<std::vector<double>>(), j.at("mu").get<std::vector<double>>(),
          j.at("sigma").get<std::vector<double>>());
    }
    if (type == "grid") {
      return ForecastDistribution::grid_cdf(j.at("xs").get<std::vector<double>>(),
                                            j.at("cdf").get<std::vector<double>>());
    }
  } catch (const json::exception& e) {
    throw ParseError(std::string("bad forecast fields: ") + e.what(), line);
  } catch (const Error& e) {
    throw ParseError(std::string("invalid forecast: ") + e.what(), line);
  }
  throw ParseError("unknown forecast type \"" + type + "\"", line);
}

}  // namespace

ForecastObservationArchive read_foa(const std::string& path) {
  auto in = open_in(path);
  std::vector<ForecastRecord> records;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty()) continue;
    json j;
    try {
      j = json::parse(line);
    } catch (const json::exception& e) {
      throw ParseError(path + ":" + std::to_string(lineno) + ": " + e.what(), lineno);
    }
    if (!j.is_object() || !j.contains("t") || !j.contains("x") || !j.contains("forecast"))
      throw ParseError(path + ":" + std::to_string(lineno) +
                           ": record needs \"t\", \"x\" and \"forecast\"",
                       lineno);
    ForecastRecord rec;
    try {
      rec.time_index = j.at("t").get<std::int64_t>();
      rec.observation = j.at("x").get<double>();
    } catch (const json::exception& e) {
      throw ParseError(path + ":" + std::to_string(lineno) + ": " + e.what(), lineno);
    }
    rec.forecast = forecast_from_json(j.at("forecast"), lineno);
    if (j.contains("meta")) {
      for (const auto& [k, v] : j.at("meta").items())
        rec.metadata[k] = v.is_string() ? v.get<std::string>() : v.dump();
    }
    records.push_back(std::move(rec));
  }
  try {
    return ForecastObservationArchive(std::move(records));
  } catch (const Error& e) {
    throw ParseError(path + ": " + e.what(), 0);
  }
}

void write_foa(const std::string& path, const ForecastObservationArchive& archive) {
  auto out = open_out(path);
  for (const auto& rec : archive.records()) {
    json j;
    j["t"] = rec.time_index;
    j["x"] = rec.observation;
    j["forecast"] = forecast_to_json(rec.forecast);
    if (!rec.metadata.empty()) j["meta"] = rec.metadata;
    out << j.dump() << '\n';
  }
}

void write_pit_csv(const std::string& path, const PitSeries& series) {
  auto out = open_out(path);
  out << "t,f\n";
  for (std::size_t i = 0; i < series.size(); ++i)
    out << series.times()[i] << ',' << fmt17(series.values()[i]) << '\n';
}

PitSeries read_pit_csv(const std::string& path) {
  auto in = open_in(path);
  std::string line;
  std::size_t lineno = 0;
  std::vector<double> values;
  std::vector<std::int64_t> times;
  while (std::getline(in, line)) {
    ++lineno;
    if (lineno == 1) {
      if (line.rfind("t,f", 0) != 0)
        throw ParseError(path + ":1: expected header \"t,f\"", 1);
      continue;
    }
    if (line.empty()) continue;
    const auto comma = line.find(',');
    if (comma == std::string::npos)
      throw ParseError(path + ":" + std::to_string(lineno) + ": expected \"t,f\" row",
                       lineno);
    try {
      times.push_back(std::stoll(line.substr(0, comma)));
      values.push_back(std::stod(line.substr(comma + 1)));
    } catch (const std::exception&) {
      throw ParseError(path + ":" + std::to_string(lineno) + ": malformed number", lineno);
    }
  }
  try {
    return PitSeries(std::move(values), std::move(times));
  } catch (const Error& e) {
    throw ParseError(path + ": " + e.what(), 0);
  }
}

void write_acf_csv(const std::string& path, const AcfReport& report) {
  auto out = open_out(path);
  out << "lag,acf,band\n";
  for (std::size_t k = 0; k < report.acf.size(); ++k)
    out << k << ',' << fmt17(report.acf[k]) << ',' << fmt17(report.noise_band) << '\n';
}

void write_game_csv(const std::string& path, const GameSummary& summary) {
  auto out = open_out(path);
  out << "t,x,f,w\n";
  for (const auto& r : summary.rounds) {
    out << r.time_index << ',' << fmt17(r.observation) << ',' << fmt17(r.pit_value)
        << ',' << fmt17(r.winnings) << '\n';
  }
}

namespace {

json report_to_json(const GainReport& r) {
  json j;
  j["ei_bits"] = r.ei;
  j["delta_s_bar_bits"] = r.delta_s_bar;
  j["var_delta_s_bits2"] = r.var_delta_s;
  if (std::isfinite(r.fam)) j["fam"] = r.fam; else j["fam"] = nullptr;
  j["bins"] = r.bins;
  j["samples"] = r.samples;
  j["ei_asymptote"] = r.ei_asymptote;
  return j;
}

GainReport report_from_json(const json& j) {
  GainReport r;
  r.ei = j.at("ei_bits").get<double>();
  r.delta_s_bar = j.at("delta_s_bar_bits").get<double>();
  r.var_delta_s = j.at("var_delta_s_bits2").get<double>();
  r.fam = j.at("fam").is_null() ? std::numeric_limits<double>::quiet_NaN()
                                : j.at("fam").get<double>();
  r.bins = j.at("bins").get<int>();
  r.samples = j.at("samples").get<long>();
  r.ei_asymptote = j.at("ei_asymptote").get<double>();
  return r;
}

}  // namespace

void write_game_summary_json(const std::string& path, const GameSummary& summary) {
  const PredictionCheck check = prediction_check(summary);
  json j;
  j["rounds"] = summary.rounds.size();
  j["mean_winnings_bits"] = summary.mean_winnings;
  j["sample_sd_bits"] = summary.sample_sd;
  j["kelly_wealth_log2"] = summary.kelly_wealth_log2;
  j["kelly_wealth_factor"] = kelly_wealth_factor(summary);
  j["histogram"] = {{"edges", summary.histogram.edges},
                    {"counts", summary.histogram.counts}};
  j["predicted"] = report_to_json(summary.predicted);
  j["prediction_check"] = {{"z", check.z}, {"verdict", check.pass ? "pass" : "fail"}};
  open_out(path) << j.dump(2) << '\n';
}

void write_model(const std::string& path, const GpmeModel& m,
                 const std::string& cov_sidecar) {
  json j;
  j["bin_edges"] = m.binned.edges;
  j["bin_counts"] = m.binned.counts;
  j["samples"] = m.binned.total;
  j["train_t_min"] = m.binned.t_min;
  j["train_t_max"] = m.binned.t_max;
  j["theta"] = {{"amplitude", m.theta.amplitude},
                {"length_scale", m.theta.length_scale},
                {"jitter", m.theta.jitter}};
  j["l0"] = m.l0;
  j["grid_size"] = m.grid_size();
  j["mean_log"] = m.mean_log;
  j["var_diag"] = m.var_diag;
  j["density"] = m.density;
  j["a_norm"] = m.a_norm;
  j["renorm_correction"] = m.renorm_correction;
  j["gain_report"] = report_to_json(m.report);
  if (!cov_sidecar.empty()) {
    if (!m.has_cov()) throw Error("write_model: no covariance to persist");
    const std::string name = std::filesystem::path(cov_sidecar).filename().string();
    j["cov_sidecar"] = name;
    std::ofstream bin(cov_sidecar, std::ios::binary);
    if (!bin) throw Error("cannot open for writing: " + cov_sidecar);
    // Symmetric matrix, so Eigen's column-major buffer is also the
    // row-major layout the sidecar format declares.
    const auto n = static_cast<std::size_t>(m.cov.rows());
    bin.write(reinterpret_cast<const char*>(m.cov.data()),
              static_cast<std::streamsize>(n * n * sizeof(double)));
  }
  open_out(path) << j.dump() << '\n';
}

GpmeModel read_model(const std::string& path) {
  json j;
  try {
    j = json::parse(open_in(path));
  } catch (const json::exception& e) {
    throw ParseError(path + ": " + e.what(), 0);
  }
  GpmeModel m;
  try {
    m.binned.edges = j.at("bin_edges").get<std::vector<double>>();
    m.binned.counts = j.at("bin_counts").get<std::vector<int>>();
    m.binned.total = j.at("samples").get<long>();
    m.binned.t_min = j.at("train_t_min").get<std::int64_t>();
    m.binned.t_max = j.at("train_t_max").get<std::int64_t>();
    const int nb = m.binned.size();
    m.binned.centers.resize(nb);
    m.binned.widths.resize(nb);
    m.binned.log_rate.resize(nb);
    m.binned.noise_var.resize(nb);
    for (int v = 0; v < nb; ++v) {
      m.binned.centers[v] = 0.5 * (m.binned.edges[v] + m.binned.edges[v + 1]);
      m.binned.widths[v] = m.binned.edges[v + 1] - m.binned.edges[v];
      m.binned.log_rate[v] = std::log(m.binned.counts[v] / m.binned.widths[v]);
      m.binned.noise_var[v] = 1.0 / m.binned.counts[v];
    }
    m.theta.amplitude = j.at("theta").at("amplitude").get<double>();
    m.theta.length_scale = j.at("theta").at("length_scale").get<double>();
    m.theta.jitter = j.at("theta").at("jitter").get<double>();
    m.l0 = j.at("l0").get<double>();
    const int gs = j.at("grid_size").get<int>();
    m.grid = linspace(0.0, 1.0, static_cast<std::size_t>(gs));
    m.mean_log = j.at("mean_log").get<std::vector<double>>();
    m.var_diag = j.at("var_diag").get<std::vector<double>>();
    m.density = j.at("density").get<std::vector<double>>();
    m.a_norm = j.at("a_norm").get<double>();
    m.renorm_correction = j.at("renorm_correction").get<double>();
    m.report = report_from_json(j.at("gain_report"));
  } catch (const json::exception& e) {
    throw ParseError(path + ": " + e.what(), 0);
  }
  if (m.mean_log.size() != m.grid.size() || m.var_diag.size() != m.grid.size() ||
      m.density.size() != m.grid.size())
    throw ParseError(path + ": grid arrays do not match grid_size", 0);
  m.log_density.resize(m.density.size());
  for (std::size_t i = 0; i < m.density.size(); ++i) {
    if (!(m.density[i] > 0.0)) throw ParseError(path + ": density must be positive", 0);
    m.log_density[i] = std::log(m.density[i]);
  }
  m.log_density_interp = std::make_shared<MonotoneCubic>(m.grid, m.log_density);

  if (j.contains("cov_sidecar")) {
    const auto sidecar = std::filesystem::path(path).parent_path() /
                         j.at("cov_sidecar").get<std::string>();
    std::ifstream bin(sidecar, std::ios::binary);
    if (!bin) throw Error("cannot open covariance sidecar: " + sidecar.string());
    const auto n = m.grid.size();
    m.cov.resize(static_cast<long>(n), static_cast<long>(n));
    bin.read(reinterpret_cast<char*>(m.cov.data()),
             static_cast<std::streamsize>(n * n * sizeof(double)));
    if (!bin) throw Error("covariance sidecar truncated: " + sidecar.string());
  }
  return m;
}

}  // namespace recal
