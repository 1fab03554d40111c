#include "hodmd/cli.hpp"

#include "hodmd/calibrate.hpp"
#include "hodmd/error.hpp"
#include "hodmd/forecast.hpp"
#include "hodmd/ingest.hpp"
#include "hodmd/mode_select.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <ostream>
#include <sstream>

namespace hodmd::cli {

namespace {

using Json = nlohmann::ordered_json;

struct UsageError : ValidationError {
  using ValidationError::ValidationError;
};

std::optional<long> to_long(std::string_view text) {
  long value = 0;
  const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
  if (ec != std::errc() || ptr != text.data() + text.size()) return std::nullopt;
  return value;
}

std::optional<double> to_double(std::string_view text) {
  double value = 0;
  const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
  if (ec != std::errc() || ptr != text.data() + text.size()) return std::nullopt;
  return value;
}

TimeSeriesGrid load_clean(const std::filesystem::path& path) { return fill_gaps(load_csv(path)); }

void write_text(const std::filesystem::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw ValidationError("cannot write '" + path.string() + "'");
  out << text;
}

std::string grid_to_csv(const TimeSeriesGrid& grid, const std::vector<ExtraColumn>& extra = {}) {
  std::ostringstream out;
  write_csv(out, grid, extra);
  return out.str();
}

void emit_warnings(std::ostream& err, const std::vector<std::string>& warnings) {
  for (const auto& w : warnings) err << "warning: " << w << '\n';
}

std::string method_label(const DmdSpectrum& spectrum) {
  return spectrum.d == 1 ? "standard DMD (d=1)" : "HODMD (d=" + std::to_string(spectrum.d) + ")";
}

Json spectrum_json(const RankedSpectrum& ranked, bool fb_requested) {
  const DmdSpectrum& s = ranked.spectrum;
  Json root;
  root["method"] = method_label(s);
  root["d"] = s.d;
  root["eps1"] = s.eps1;
  root["eps2"] = s.eps2;
  root["fb_requested"] = fb_requested;
  root["fb_applied"] = s.fb;
  root["dt_seconds"] = s.dt;
  root["t0"] = s.t0;
  root["num_snapshots"] = s.num_snapshots;
  root["channel_names"] = s.channel_names;
  root["offsets"] = std::vector<double>(s.offsets.data(), s.offsets.data() + s.offsets.size());
  root["num_modes"] = s.size();
  root["integral_contribution_formula"] = "|a| * ||u|| * sum_{k=0}^{K-1} exp(delta * k * dt) * dt";

  std::vector<long> rank_of(static_cast<std::size_t>(s.size()), -1);
  for (std::size_t i = 0; i < ranked.order.size(); ++i) rank_of[static_cast<std::size_t>(ranked.order[i])] = static_cast<long>(i);

  Json modes = Json::array();
  for (Eigen::Index m = 0; m < s.size(); ++m) {
    Json mode;
    mode["index"] = m;
    const long pair = ranked.pair_of(m);
    mode["pair_id"] = pair >= 0 ? Json(pair) : Json(nullptr);
    mode["rank"] = rank_of[static_cast<std::size_t>(m)] >= 0 ? Json(rank_of[static_cast<std::size_t>(m)]) : Json(nullptr);
    const auto excluded = std::find_if(ranked.excluded.begin(), ranked.excluded.end(),
                                       [m](const ExcludedMode& e) { return e.index == m; });
    mode["excluded"] = excluded != ranked.excluded.end();
    if (excluded != ranked.excluded.end()) mode["exclusion_reason"] = excluded->reason;
    mode["frequency_rad_per_s"] = s.frequencies[m];
    mode["frequency_cycles_per_sample"] = s.cycles_per_sample(m);
    mode["frequency_cycles_per_day"] = s.cycles_per_day(m);
    mode["growth_rate_per_s"] = s.growth_rates[m];
    mode["growth_rate_per_sample"] = s.growth_per_sample(m);
    mode["amplitude_abs"] = std::abs(s.amplitudes[m]);
    mode["amplitude_phase"] = std::arg(s.amplitudes[m]);
    mode["integral_contribution"] = ranked.contributions[m];
    Json re = Json::array(), im = Json::array();
    for (Eigen::Index j = 0; j < s.channels(); ++j) {
      re.push_back(s.modes(j, m).real());
      im.push_back(s.modes(j, m).imag());
    }
    mode["mode_real"] = re;
    mode["mode_imag"] = im;
    modes.push_back(mode);
  }
  root["modes"] = modes;

  Json pairs = Json::array();
  for (std::size_t p = 0; p < ranked.pairs.size(); ++p) {
    const auto& pair = ranked.pairs[p];
    Json entry;
    entry["pair_id"] = p;
    entry["members"] = pair.second ? Json::array({pair.first, *pair.second}) : Json::array({pair.first});
    entry["unmatched"] = pair.unmatched;
    entry["contribution"] = ranked.contributions[pair.first];
    entry["frequency_cycles_per_sample"] = std::abs(s.cycles_per_sample(pair.first));
    pairs.push_back(entry);
  }
  root["ranked_pairs"] = pairs;

  std::vector<std::string> warnings = s.warnings;
  warnings.insert(warnings.end(), ranked.warnings.begin(), ranked.warnings.end());
  root["warnings"] = warnings;
  return root;
}

std::string ranked_csv(const RankedSpectrum& ranked) {
  const DmdSpectrum& s = ranked.spectrum;
  std::ostringstream out;
  out << "rank,pair_id,members,frequency_cycles_per_sample,frequency_cycles_per_day,growth_rate_per_s,amplitude_abs,"
         "contribution,cumulative_fraction\n";
  double total = 0.0;
  for (const auto& pair : ranked.pairs) {
    total += ranked.contributions[pair.first];
    if (pair.second) total += ranked.contributions[*pair.second];
  }
  double running = 0.0;
  for (std::size_t p = 0; p < ranked.pairs.size(); ++p) {
    const auto& pair = ranked.pairs[p];
    double contribution = ranked.contributions[pair.first];
    if (pair.second) contribution += ranked.contributions[*pair.second];
    running += contribution;
    const Eigen::Index m = pair.first;
    out << p << ',' << p << ',' << m;
    if (pair.second) out << ' ' << *pair.second;
    out << ',' << format_real(std::abs(s.cycles_per_sample(m))) << ',' << format_real(std::abs(s.cycles_per_day(m)))
        << ',' << format_real(s.growth_rates[m]) << ',' << format_real(std::abs(s.amplitudes[m])) << ','
        << format_real(contribution) << ',' << format_real(total > 0 ? running / total : 0.0) << '\n';
  }
  return out.str();
}

std::string ranked_table_text(const RankedSpectrum& ranked, std::size_t limit) {
  const DmdSpectrum& s = ranked.spectrum;
  std::ostringstream out;
  out << method_label(s) << ", " << s.size() << " modes, " << ranked.pairs.size() << " pairs kept, "
      << ranked.excluded.size() << " transient modes excluded\n";
  out << std::setw(5) << "pair" << std::setw(16) << "cyc/sample" << std::setw(14) << "cyc/day" << std::setw(16)
      << "growth 1/s" << std::setw(16) << "contribution" << '\n';
  for (std::size_t p = 0; p < std::min(limit, ranked.pairs.size()); ++p) {
    const Eigen::Index m = ranked.pairs[p].first;
    double contribution = ranked.contributions[m];
    if (ranked.pairs[p].second) contribution += ranked.contributions[*ranked.pairs[p].second];
    out << std::setw(5) << p << std::setw(16) << std::setprecision(6) << std::abs(s.cycles_per_sample(m))
        << std::setw(14) << std::abs(s.cycles_per_day(m)) << std::setw(16) << s.growth_rates[m] << std::setw(16)
        << contribution << '\n';
  }
  if (ranked.pairs.size() > limit) out << "... " << ranked.pairs.size() - limit << " more in ranked_modes.csv\n";
  return out.str();
}

DmdSpectrum select_for_output(const RankedSpectrum& ranked, const RunConfig& config) {
  if (!config.num_pairs) return kept_modes(ranked);
  return truncate(ranked, *config.num_pairs);
}

TimeSeriesGrid grid_from_result(const ForecastResult& result, const DmdSpectrum& spectrum,
                                const TimeSeriesGrid& like) {
  TimeSeriesGrid grid;
  grid.channel_names = spectrum.channel_names;
  grid.values = result.values;
  grid.t0 = result.times.empty() ? spectrum.t0 : result.times.front();
  grid.dt = spectrum.dt;
  grid.timestamp_format = like.timestamp_format;
  return grid;
}

// Slice of `truth` covering the forecast window that starts at `start`.
Eigen::MatrixXd align_truth(const TimeSeriesGrid& truth, double start, double dt, Eigen::Index horizon,
                            Eigen::Index channels) {
  if (truth.channels() != channels) {
    throw DimensionError("truth file has " + std::to_string(truth.channels()) + " channels, expected " +
                         std::to_string(channels));
  }
  if (std::abs(truth.dt - dt) > 1e-9 * dt) throw ClockMismatchError("clock mismatch: truth dt differs from input dt");
  const double offset = (start - truth.t0) / dt;
  const auto first = static_cast<Eigen::Index>(std::llround(offset));
  if (std::abs(offset - static_cast<double>(first)) > 0.01 || first < 0 || first + horizon > truth.snapshots()) {
    throw ClockMismatchError("clock mismatch: truth file does not cover the forecast window");
  }
  return truth.values.middleCols(first, horizon);
}

Json vector_json(const Eigen::VectorXd& v) { return std::vector<double>(v.data(), v.data() + v.size()); }

// --- subcommands -----------------------------------------------------------

int cmd_vpd(const RunConfig& config, std::ostream& out, std::ostream& err) {
  if (config.inputs.size() != 3) throw UsageError("vpd expects TEMP_CSV RH_CSV OUT_CSV");
  const TimeSeriesGrid temperature = load_csv(config.inputs[0]);
  const TimeSeriesGrid humidity = load_csv(config.inputs[1]);
  const TimeSeriesGrid vpd = vpd_transform(temperature, humidity);
  const std::string text = grid_to_csv(vpd);
  write_text(config.inputs[2], text);
  out << "wrote " << config.inputs[2].string() << " (" << vpd.channels() << " channels, " << vpd.snapshots()
      << " rows)\n";
  (void)err;
  return kSuccess;
}

int cmd_decompose(const RunConfig& config, std::ostream& out, std::ostream& err) {
  if (config.inputs.size() != 1) throw UsageError("decompose expects one INPUT_CSV");
  const TimeSeriesGrid raw = load_clean(config.inputs[0]);
  const DmdSpectrum spectrum = hodmd(center(raw), config.hodmd);
  const RankedSpectrum ranked = rank_and_pair(spectrum, config.growth_limit);
  if (config.num_pairs && *config.num_pairs > ranked.pairs.size()) {
    throw RangeError("--num-pairs " + std::to_string(*config.num_pairs) + " exceeds the " +
                     std::to_string(ranked.pairs.size()) + " available pairs");
  }
  const DmdSpectrum selected = select_for_output(ranked, config);
  const ForecastResult recon = reconstruct_and_forecast(selected, 0);

  const std::string json_text = spectrum_json(ranked, config.hodmd.fb).dump(2) + "\n";
  const std::string ranked_text = ranked_csv(ranked);
  const std::string recon_text = grid_to_csv(grid_from_result(recon, selected, raw));

  std::filesystem::create_directories(config.out_dir);
  write_text(config.out_dir / "spectrum.json", json_text);
  write_text(config.out_dir / "ranked_modes.csv", ranked_text);
  write_text(config.out_dir / "reconstruction.csv", recon_text);

  emit_warnings(err, spectrum.warnings);
  emit_warnings(err, ranked.warnings);
  out << ranked_table_text(ranked, 20);
  return kSuccess;
}

int cmd_forecast(const RunConfig& config, std::ostream& out, std::ostream& err) {
  if (config.inputs.size() != 1) throw UsageError("forecast expects one INPUT_CSV");
  const TimeSeriesGrid raw = load_clean(config.inputs[0]);
  const Eigen::Index horizon = config.horizon.resolve(raw.dt);
  std::optional<TimeSeriesGrid> truth;
  if (config.truth) truth = load_clean(*config.truth);

  const DmdSpectrum spectrum = hodmd(center(raw), config.hodmd);
  const RankedSpectrum ranked = rank_and_pair(spectrum, config.growth_limit);
  if (ranked.pairs.empty()) throw NumericalError("every mode was excluded as transient");
  if (config.num_pairs && *config.num_pairs > ranked.pairs.size()) {
    throw RangeError("--num-pairs " + std::to_string(*config.num_pairs) + " exceeds the " +
                     std::to_string(ranked.pairs.size()) + " available pairs");
  }
  const DmdSpectrum selected = select_for_output(ranked, config);
  const ForecastResult result = reconstruct_and_forecast(selected, horizon);

  std::vector<std::string> marker(result.times.size(), "0");
  for (std::size_t i = static_cast<std::size_t>(result.horizon_split); i < marker.size(); ++i) marker[i] = "1";
  const std::string csv_text = grid_to_csv(grid_from_result(result, selected, raw), {{"is_forecast", marker}});

  std::optional<std::string> metrics_text;
  if (truth) {
    const Eigen::MatrixXd predicted = result.values.rightCols(horizon);
    const Eigen::MatrixXd actual =
        align_truth(*truth, result.times[static_cast<std::size_t>(result.horizon_split)], raw.dt, horizon,
                    raw.channels());
    const Eigen::VectorXd e = rmse(predicted, actual);
    const Eigen::VectorXd r = rrmse(predicted, actual);
    Json metrics;
    metrics["spectrum_id"] = result.spectrum_id;
    metrics["horizon_samples"] = horizon;
    metrics["channel_names"] = raw.channel_names;
    metrics["rmse"] = vector_json(e);
    metrics["rmse_mean"] = e.mean();
    metrics["rrmse_percent"] = vector_json(r);
    metrics["rrmse_mean_percent"] = r.mean();
    metrics["warnings"] = result.warnings;
    metrics_text = metrics.dump(2) + "\n";
  }

  std::filesystem::create_directories(config.out_dir);
  write_text(config.out_dir / "forecast.csv", csv_text);
  if (metrics_text) write_text(config.out_dir / "metrics.json", *metrics_text);

  emit_warnings(err, spectrum.warnings);
  emit_warnings(err, ranked.warnings);
  emit_warnings(err, result.warnings);
  out << "forecast " << horizon << " samples with " << selected.size() << " modes (" << result.spectrum_id << ")\n";
  if (metrics_text) out << *metrics_text;
  return kSuccess;
}

int cmd_calibrate(const RunConfig& config, std::ostream& out, std::ostream& err) {
  if (config.inputs.size() != 1) throw UsageError("calibrate expects one INPUT_CSV");
  if (!config.sweep_d && !config.sweep_eps) throw UsageError("calibrate needs --sweep-d and/or --sweep-eps");
  const TimeSeriesGrid raw = load_clean(config.inputs[0]);

  CalibrationConfig cal;
  cal.hodmd = config.hodmd;
  cal.horizon = config.horizon.resolve(raw.dt);
  cal.growth_limit = config.growth_limit;
  cal.num_pairs = config.num_pairs;

  std::vector<CalibrationTable> tables;
  if (config.sweep_d) tables.push_back(sweep_d(raw, config.sweep_d->expand(), cal));
  if (config.sweep_eps) tables.push_back(sweep_eps(raw, *config.sweep_eps, cal));

  std::filesystem::create_directories(config.out_dir);
  for (const auto& table : tables) {
    std::ostringstream csv;
    write_calibration_csv(csv, table);
    const std::string text = format_calibration_table(table);
    write_text(config.out_dir / ("calibration_" + table.swept_parameter + ".csv"), csv.str());
    write_text(config.out_dir / ("calibration_" + table.swept_parameter + ".txt"), text);
    out << text << '\n';
    for (std::size_t i = 0; i < table.values.size(); ++i) {
      if (table.failed[i]) err << "warning: " << table.swept_parameter << " row " << i << " failed: " << table.errors[i] << '\n';
    }
  }
  return kSuccess;
}

int cmd_synth(const RunConfig& config, std::ostream& out, std::ostream& err) {
  if (config.inputs.size() != 2) throw UsageError("synth expects SPEC_JSON OUT_CSV");
  std::ifstream in(config.inputs[0]);
  if (!in) throw ValidationError("cannot open '" + config.inputs[0].string() + "'");
  std::stringstream buffer;
  buffer << in.rdbuf();
  SynthSpec spec = synth_spec_from_json(buffer.str());
  if (config.seed) spec.seed = *config.seed;
  const TimeSeriesGrid grid = synth_generate(spec);
  write_text(config.inputs[1], grid_to_csv(grid));
  out << "wrote " << config.inputs[1].string() << " (" << grid.channels() << " channels, " << grid.snapshots()
      << " rows)\n";
  (void)err;
  return kSuccess;
}

}  // namespace

std::vector<Eigen::Index> IntRange::expand() const {
  std::vector<Eigen::Index> values;
  for (long v = start; v <= stop; v += step) values.push_back(v);
  return values;
}

IntRange parse_range(const std::string& text) {
  const auto first = text.find(':');
  const auto second = first == std::string::npos ? std::string::npos : text.find(':', first + 1);
  if (second == std::string::npos || text.find(':', second + 1) != std::string::npos) {
    throw ValidationError("bad range '" + text + "', expected start:stop:step");
  }
  const auto start = to_long(std::string_view(text).substr(0, first));
  const auto stop = to_long(std::string_view(text).substr(first + 1, second - first - 1));
  const auto step = to_long(std::string_view(text).substr(second + 1));
  if (!start || !stop || !step || *step <= 0 || *start > *stop || *start < 1) {
    throw ValidationError("bad range '" + text + "', expected 1 <= start <= stop and step > 0");
  }
  return {*start, *stop, *step};
}

std::vector<double> parse_real_list(const std::string& text) {
  std::vector<double> values;
  std::size_t start = 0;
  while (true) {
    const auto pos = text.find(',', start);
    const auto token = std::string_view(text).substr(start, pos == std::string::npos ? std::string::npos : pos - start);
    const auto value = to_double(token);
    if (!value) throw ValidationError("bad number '" + std::string(token) + "' in list '" + text + "'");
    values.push_back(*value);
    if (pos == std::string::npos) break;
    start = pos + 1;
  }
  return values;
}

HorizonSpec parse_horizon(const std::string& text) {
  if (text.empty()) throw ValidationError("empty horizon");
  if (const auto samples = to_long(text)) {
    if (*samples < 1) throw ValidationError("horizon must be >= 1 sample");
    return {*samples, std::nullopt};
  }
  double unit = 0.0;
  switch (text.back()) {
    case 's': unit = 1.0; break;
    case 'm': unit = 60.0; break;
    case 'h': unit = 3600.0; break;
    case 'd': unit = 86400.0; break;
    default: throw ValidationError("bad horizon '" + text + "', expected samples or a duration like 3d");
  }
  const auto amount = to_double(std::string_view(text).substr(0, text.size() - 1));
  if (!amount || !(*amount > 0.0)) throw ValidationError("bad horizon '" + text + "'");
  return {std::nullopt, *amount * unit};
}

Eigen::Index HorizonSpec::resolve(double dt) const {
  if (samples) return *samples;
  if (!seconds) return kDefaultHorizon;
  const double count = *seconds / dt;
  const double rounded = std::round(count);
  if (rounded < 1.0 || std::abs(count - rounded) > 1e-6) {
    throw ValidationError("horizon of " + format_real(*seconds) + " s is not a whole number of " + format_real(dt) +
                          " s samples");
  }
  return static_cast<Eigen::Index>(rounded);
}

void RunConfig::validate() const {
  if (hodmd.d < 1) throw RangeError("--d must be >= 1");
  if (!(hodmd.eps1 >= 0.0 && hodmd.eps1 < 1.0)) throw RangeError("--eps1 must lie in [0, 1)");
  if (hodmd.eps2 && !(*hodmd.eps2 >= 0.0 && *hodmd.eps2 < 1.0)) throw RangeError("--eps2 must lie in [0, 1)");
  if (!(growth_limit > 0.0)) throw RangeError("--growth-limit must be > 0");
  if (num_pairs && *num_pairs < 1) throw RangeError("--num-pairs must be >= 1");
  if (sweep_eps) {
    if (sweep_eps->empty()) throw ValidationError("--sweep-eps list is empty");
    for (const double e : *sweep_eps) {
      if (!(e >= 0.0 && e < 1.0)) throw RangeError("--sweep-eps values must lie in [0, 1)");
    }
  }
}

SynthSpec synth_spec_from_json(const std::string& json_text) {
  Json j;
  try {
    j = Json::parse(json_text);
  } catch (const Json::parse_error& e) {
    throw FormatError(std::string("synth spec: ") + e.what());
  }
  try {
    SynthSpec spec;
    spec.channels = j.at("channels").get<Eigen::Index>();
    spec.snapshots = j.at("K").get<Eigen::Index>();
    spec.dt = j.value("dt", 1.0);
    spec.noise_sigma = j.value("noise_sigma", 0.0);
    spec.seed = j.value("seed", std::uint64_t{0});
    spec.t0 = j.value("t0", 0.0);
    for (const auto& p : j.at("mode_pairs")) {
      ModePairSpec pair;
      pair.frequency = p.at("frequency").get<double>();
      pair.growth_rate = p.value("growth_rate", 0.0);
      pair.amplitude = p.value("amplitude", 1.0);
      pair.phase = p.value("phase", 0.0);
      pair.channel_shape = p.at("channel_shape").get<std::vector<double>>();
      spec.mode_pairs.push_back(std::move(pair));
    }
    spec.validate();
    return spec;
  } catch (const Json::exception& e) {
    throw FormatError(std::string("synth spec: ") + e.what());
  }
}

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Higher order dynamic mode decomposition for multi-channel sensor time series", "hodmd"};
  app.require_subcommand(1);

  RunConfig config;
  std::vector<std::string> inputs;
  std::string truth, out_dir = ".", horizon, sweep_d, sweep_eps;
  long d = 1;
  double eps1 = 1e-2;
  std::optional<double> eps2;
  bool fb = true;
  std::optional<long> num_pairs;
  std::optional<std::uint64_t> seed;

  auto add_model_options = [&](CLI::App* sub) {
    sub->add_option("--d", d, "Number of delayed snapshots (d=1 is standard DMD)")->capture_default_str();
    sub->add_option("--eps1", eps1, "Relative singular-value tolerance of the spatial reduction")->capture_default_str();
    sub->add_option("--eps2", eps2, "Tolerance of the delay-embedded reduction (default: eps1)");
    sub->add_flag("--fb,!--no-fb", fb, "Forward-backward noise correction (default on)");
    sub->add_option("--growth-limit", config.growth_limit, "Transient threshold on |delta| K dt")->capture_default_str();
    sub->add_option("--num-pairs", num_pairs, "Dominant pairs kept (elbow); default keeps all non-transient modes");
    sub->add_option("--out-dir", out_dir, "Output directory")->capture_default_str();
  };

  auto* vpd = app.add_subcommand("vpd", "Compute VPD (Pa) from temperature (C) and relative humidity (%) CSVs");
  vpd->add_option("files", inputs, "TEMP_CSV RH_CSV OUT_CSV")->expected(3)->required();

  auto* decompose = app.add_subcommand("decompose", "Decompose a CSV and write spectrum, ranking and reconstruction");
  decompose->add_option("input", inputs, "INPUT_CSV")->expected(1)->required();
  add_model_options(decompose);

  auto* fc = app.add_subcommand("forecast", "Reconstruct and forecast a CSV");
  fc->add_option("input", inputs, "INPUT_CSV")->expected(1)->required();
  add_model_options(fc);
  fc->add_option("--horizon", horizon, "Samples, or a duration such as 3d (default 432)");
  fc->add_option("--truth", truth, "Ground-truth CSV covering the forecast window");

  auto* calibrate = app.add_subcommand("calibrate", "Sweep d and/or eps1 scoring the held-out forecast");
  calibrate->add_option("input", inputs, "INPUT_CSV")->expected(1)->required();
  add_model_options(calibrate);
  calibrate->add_option("--horizon", horizon, "Held-out samples, or a duration such as 3d (default 432)");
  calibrate->add_option("--sweep-d", sweep_d, "Inclusive range start:stop:step");
  calibrate->add_option("--sweep-eps", sweep_eps, "Comma-separated eps1 values");

  auto* synth = app.add_subcommand("synth", "Generate a synthetic multi-channel signal from a JSON spec");
  synth->add_option("files", inputs, "SPEC_JSON OUT_CSV")->expected(2)->required();
  synth->add_option("--seed", seed, "Override the noise seed given in SPEC_JSON");

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kSuccess : kUsageError;
  }

  try {
    config.command = app.get_subcommands().front()->get_name();
    for (const auto& p : inputs) config.inputs.emplace_back(p);
    if (!truth.empty()) config.truth = truth;
    config.out_dir = out_dir;
    config.hodmd.d = d;
    config.hodmd.eps1 = eps1;
    config.hodmd.eps2 = eps2;
    config.hodmd.fb = fb;
    if (num_pairs) {
      if (*num_pairs < 1) throw RangeError("--num-pairs must be >= 1");
      config.num_pairs = static_cast<std::size_t>(*num_pairs);
    }
    if (!horizon.empty()) config.horizon = parse_horizon(horizon);
    if (!sweep_d.empty()) config.sweep_d = parse_range(sweep_d);
    if (!sweep_eps.empty()) config.sweep_eps = parse_real_list(sweep_eps);
    config.seed = seed;
    config.validate();
  } catch (const ValidationError& e) {
    err << "error: " << e.what() << '\n';
    err << app.get_subcommands().front()->help();
    return kUsageError;
  }

  try {
    if (config.command == "vpd") return cmd_vpd(config, out, err);
    if (config.command == "decompose") return cmd_decompose(config, out, err);
    if (config.command == "forecast") return cmd_forecast(config, out, err);
    if (config.command == "calibrate") return cmd_calibrate(config, out, err);
    if (config.command == "synth") return cmd_synth(config, out, err);
  } catch (const UsageError& e) {
    err << "error: " << e.what() << '\n';
    return kUsageError;
  } catch (const ValidationError& e) {
    err << "error: " << e.what() << '\n';
    return kUsageError;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kComputationFailure;
  }
  return kUsageError;
}

}  // namespace hodmd::cli
