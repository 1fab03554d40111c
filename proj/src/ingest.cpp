#include "hodmd/ingest.hpp"

#include "hodmd/error.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <map>
#include <optional>
#include <random>
#include <sstream>

namespace hodmd {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) s.remove_suffix(1);
  return s;
}

std::vector<std::string_view> split_row(std::string_view line) {
  std::vector<std::string_view> cells;
  std::size_t start = 0;
  while (true) {
    const auto pos = line.find(',', start);
    if (pos == std::string_view::npos) {
      cells.push_back(trim(line.substr(start)));
      break;
    }
    cells.push_back(trim(line.substr(start, pos - start)));
    start = pos + 1;
  }
  return cells;
}

bool is_missing_token(std::string_view cell) {
  return cell.empty() || cell == "NaN" || cell == "nan" || cell == "NAN";
}

std::optional<double> parse_double(std::string_view text) {
  double value = 0.0;
  const char* first = text.data();
  const char* last = text.data() + text.size();
  if (first != last && *first == '+') ++first;
  const auto [ptr, ec] = std::from_chars(first, last, value);
  if (ec != std::errc() || ptr != last) return std::nullopt;
  return value;
}

bool parse_fixed_int(std::string_view text, std::size_t pos, std::size_t width, int& out) {
  if (pos + width > text.size()) return false;
  const auto [ptr, ec] = std::from_chars(text.data() + pos, text.data() + pos + width, out);
  return ec == std::errc() && ptr == text.data() + pos + width;
}

std::optional<double> parse_iso8601(std::string_view text) {
  // YYYY-MM-DD[T ]HH:MM[:SS[.fff]][Z|(+|-)HH:MM]
  int year = 0, month = 0, day = 0, hour = 0, minute = 0;
  if (text.size() < 16 || text[4] != '-' || text[7] != '-' || (text[10] != 'T' && text[10] != ' ') ||
      text[13] != ':')
    return std::nullopt;
  if (!parse_fixed_int(text, 0, 4, year) || !parse_fixed_int(text, 5, 2, month) ||
      !parse_fixed_int(text, 8, 2, day) || !parse_fixed_int(text, 11, 2, hour) ||
      !parse_fixed_int(text, 14, 2, minute))
    return std::nullopt;

  double seconds = 0.0;
  std::size_t pos = 16;
  if (pos < text.size() && text[pos] == ':') {
    std::size_t end = pos + 1;
    while (end < text.size() && (std::isdigit(static_cast<unsigned char>(text[end])) || text[end] == '.')) ++end;
    const auto sec = parse_double(text.substr(pos + 1, end - pos - 1));
    if (!sec) return std::nullopt;
    seconds = *sec;
    pos = end;
  }

  double zone_offset = 0.0;
  if (pos < text.size()) {
    const auto zone = text.substr(pos);
    if (zone == "Z") {
      // UTC
    } else if (zone.size() == 6 && (zone[0] == '+' || zone[0] == '-') && zone[3] == ':') {
      int zh = 0, zm = 0;
      if (!parse_fixed_int(zone, 1, 2, zh) || !parse_fixed_int(zone, 4, 2, zm)) return std::nullopt;
      zone_offset = (zone[0] == '+' ? 1.0 : -1.0) * (zh * 3600.0 + zm * 60.0);
    } else {
      return std::nullopt;
    }
  }

  using namespace std::chrono;
  const year_month_day ymd{std::chrono::year{year}, std::chrono::month{static_cast<unsigned>(month)},
                           std::chrono::day{static_cast<unsigned>(day)}};
  if (!ymd.ok() || hour > 23 || minute > 59 || seconds >= 61.0) return std::nullopt;
  const auto days_since_epoch = sys_days{ymd}.time_since_epoch().count();
  return static_cast<double>(days_since_epoch) * 86400.0 + hour * 3600.0 + minute * 60.0 + seconds -
         zone_offset;
}

}  // namespace

// ---------------------------------------------------------------------------
// Grid helpers
// ---------------------------------------------------------------------------

void require_same_geometry(const TimeSeriesGrid& a, const TimeSeriesGrid& b) {
  if (a.channels() != b.channels() || a.snapshots() != b.snapshots()) {
    throw DimensionError("grid shape mismatch: " + std::to_string(a.channels()) + "x" +
                         std::to_string(a.snapshots()) + " vs " + std::to_string(b.channels()) + "x" +
                         std::to_string(b.snapshots()));
  }
  if (a.t0 != b.t0 || a.dt != b.dt) {
    throw ClockMismatchError("clock mismatch: t0/dt differ between grids");
  }
}

TimeSeriesGrid slice_columns(const TimeSeriesGrid& grid, Eigen::Index first, Eigen::Index count) {
  if (first < 0 || count < 0 || first + count > grid.snapshots()) {
    throw DimensionError("column slice out of range");
  }
  TimeSeriesGrid out = grid;
  out.values = grid.values.middleCols(first, count);
  out.t0 = grid.time_at(first);
  return out;
}

// ---------------------------------------------------------------------------
// CSV
// ---------------------------------------------------------------------------

std::string format_real(double value) {
  if (std::isnan(value)) return "NaN";
  if (std::isinf(value)) return value > 0 ? "inf" : "-inf";
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", value);
  return buf;
}

std::pair<double, TimestampFormat> parse_timestamp(const std::string& text) {
  const auto cell = trim(text);
  const bool numeric = !cell.empty() && std::all_of(cell.begin(), cell.end(), [](char c) {
    return std::isdigit(static_cast<unsigned char>(c)) || c == '-' || c == '+' || c == '.';
  });
  if (numeric) {
    if (const auto v = parse_double(cell)) return {*v, TimestampFormat::EpochSeconds};
  } else if (const auto v = parse_iso8601(cell)) {
    return {*v, TimestampFormat::Iso8601};
  }
  throw FormatError("unparseable timestamp '" + std::string(cell) + "'");
}

std::string format_timestamp(double epoch_seconds, TimestampFormat format) {
  if (format == TimestampFormat::EpochSeconds) {
    if (std::abs(epoch_seconds) < 9e15 && epoch_seconds == std::floor(epoch_seconds)) {
      return std::to_string(static_cast<long long>(epoch_seconds));
    }
    return format_real(epoch_seconds);
  }
  using namespace std::chrono;
  const double whole = std::floor(epoch_seconds);
  const auto total = static_cast<long long>(whole);
  long long days = total / 86400;
  long long rem = total % 86400;
  if (rem < 0) {
    rem += 86400;
    --days;
  }
  const year_month_day ymd{sys_days{std::chrono::days{days}}};
  char buf[64];
  const double frac = epoch_seconds - whole;
  const int hh = static_cast<int>(rem / 3600), mm = static_cast<int>((rem % 3600) / 60),
            ss = static_cast<int>(rem % 60);
  if (frac == 0.0) {
    std::snprintf(buf, sizeof buf, "%04d-%02u-%02uT%02d:%02d:%02d", static_cast<int>(ymd.year()),
                  static_cast<unsigned>(ymd.month()), static_cast<unsigned>(ymd.day()), hh, mm, ss);
  } else {
    std::snprintf(buf, sizeof buf, "%04d-%02u-%02uT%02d:%02d:%09.6f", static_cast<int>(ymd.year()),
                  static_cast<unsigned>(ymd.month()), static_cast<unsigned>(ymd.day()), hh, mm, ss + frac);
  }
  return buf;
}

TimeSeriesGrid parse_csv(std::istream& in) {
  std::string line;
  if (!std::getline(in, line)) throw FormatError("empty CSV input");
  if (line.size() >= 3 && static_cast<unsigned char>(line[0]) == 0xEF) line.erase(0, 3);  // UTF-8 BOM

  const auto header = split_row(line);
  if (header.size() < 2 || header[0] != "timestamp") {
    throw FormatError("header must be 'timestamp,<channel>,...'");
  }
  const std::size_t columns = header.size();

  TimeSeriesGrid grid;
  for (std::size_t c = 1; c < columns; ++c) grid.channel_names.emplace_back(header[c]);

  std::vector<double> times;
  std::vector<double> cells;
  std::size_t line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (trim(line).empty()) continue;
    const auto row = split_row(line);
    if (row.size() != columns) {
      throw FormatError("line " + std::to_string(line_no) + ": expected " + std::to_string(columns) +
                        " columns, found " + std::to_string(row.size()));
    }
    const auto [t, format] = parse_timestamp(std::string(row[0]));
    if (times.empty()) grid.timestamp_format = format;
    times.push_back(t);
    for (std::size_t c = 1; c < columns; ++c) {
      if (is_missing_token(row[c])) {
        cells.push_back(kNaN);
        continue;
      }
      const auto v = parse_double(row[c]);
      if (!v) {
        throw FormatError("line " + std::to_string(line_no) + ": bad number '" + std::string(row[c]) + "'");
      }
      cells.push_back(*v);
    }
  }

  if (times.size() < 2) throw InsufficientDataError("need at least 2 rows, found " + std::to_string(times.size()));

  std::map<double, std::size_t> interval_counts;
  for (std::size_t k = 1; k < times.size(); ++k) {
    const double step = times[k] - times[k - 1];
    if (!(step > 0.0)) {
      throw FormatError("non-monotone timestamps at data row " + std::to_string(k + 1));
    }
    ++interval_counts[step];
  }
  const auto modal = std::max_element(interval_counts.begin(), interval_counts.end(),
                                      [](const auto& a, const auto& b) { return a.second < b.second; });
  const double dt = modal->first;
  for (std::size_t k = 1; k < times.size(); ++k) {
    const double step = times[k] - times[k - 1];
    if (std::abs(step - dt) > 0.01 * dt) {
      throw FormatError("irregular sampling at data row " + std::to_string(k + 1) + ": step " +
                        format_real(step) + " s vs modal " + format_real(dt) + " s");
    }
  }

  const auto J = static_cast<Eigen::Index>(columns - 1);
  const auto K = static_cast<Eigen::Index>(times.size());
  grid.values = Eigen::Map<Eigen::MatrixXd>(cells.data(), J, K);
  grid.t0 = times.front();
  grid.dt = dt;
  return grid;
}

TimeSeriesGrid load_csv(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw FormatError("cannot open '" + path.string() + "'");
  return parse_csv(in);
}

void write_csv(std::ostream& out, const TimeSeriesGrid& grid, const std::vector<ExtraColumn>& extra_columns) {
  for (const auto& column : extra_columns) {
    if (static_cast<Eigen::Index>(column.cells.size()) != grid.snapshots()) {
      throw DimensionError("extra column '" + column.name + "' has the wrong length");
    }
  }
  out << "timestamp";
  for (Eigen::Index j = 0; j < grid.channels(); ++j) {
    out << ','
        << (static_cast<std::size_t>(j) < grid.channel_names.size() ? grid.channel_names[j]
                                                                    : "ch" + std::to_string(j + 1));
  }
  for (const auto& column : extra_columns) out << ',' << column.name;
  out << '\n';
  for (Eigen::Index k = 0; k < grid.snapshots(); ++k) {
    out << format_timestamp(grid.time_at(k), grid.timestamp_format);
    for (Eigen::Index j = 0; j < grid.channels(); ++j) out << ',' << format_real(grid.values(j, k));
    for (const auto& column : extra_columns) out << ',' << column.cells[k];
    out << '\n';
  }
}

void save_csv(const std::filesystem::path& path, const TimeSeriesGrid& grid,
              const std::vector<ExtraColumn>& extra_columns) {
  std::ostringstream buffer;
  write_csv(buffer, grid, extra_columns);
  std::ofstream out(path, std::ios::binary);
  if (!out) throw FormatError("cannot write '" + path.string() + "'");
  out << buffer.str();
}

// ---------------------------------------------------------------------------
// Preprocessing
// ---------------------------------------------------------------------------

TimeSeriesGrid fill_gaps(const TimeSeriesGrid& grid) {
  TimeSeriesGrid out = grid;
  const Eigen::Index K = grid.snapshots();
  for (Eigen::Index j = 0; j < grid.channels(); ++j) {
    auto row = out.values.row(j);
    Eigen::Index prev = -1;  // last finite index seen
    for (Eigen::Index k = 0; k < K; ++k) {
      if (!std::isfinite(row[k])) continue;
      if (prev < 0) {
        for (Eigen::Index i = 0; i < k; ++i) row[i] = row[k];
      } else if (k - prev > 1) {
        const double left = row[prev];
        const double right = row[k];
        const double span = static_cast<double>(k - prev);
        for (Eigen::Index i = prev + 1; i < k; ++i) {
          const double w = static_cast<double>(i - prev) / span;
          row[i] = (1.0 - w) * left + w * right;
        }
      }
      prev = k;
    }
    if (prev < 0) {
      throw UnrecoverableChannelError(static_cast<std::size_t>(j) < grid.channel_names.size()
                                          ? grid.channel_names[j]
                                          : "ch" + std::to_string(j + 1));
    }
    for (Eigen::Index i = prev + 1; i < K; ++i) row[i] = row[prev];
  }
  return out;
}

TimeSeriesGrid center(const TimeSeriesGrid& grid) {
  if (grid.has_missing()) throw ValidationError("center requires a gap-free grid");
  TimeSeriesGrid out = grid;
  const Eigen::VectorXd means = grid.values.rowwise().mean();
  out.values = grid.values.colwise() - means;
  out.offsets = grid.offsets ? Eigen::VectorXd(*grid.offsets + means) : means;
  return out;
}

Eigen::MatrixXd uncenter(const Eigen::MatrixXd& values, const Eigen::VectorXd& offsets) {
  if (values.rows() != offsets.size()) {
    throw DimensionError("uncenter: " + std::to_string(values.rows()) + " rows but " +
                         std::to_string(offsets.size()) + " offsets");
  }
  return values.colwise() + offsets;
}

// ---------------------------------------------------------------------------
// VPD
// ---------------------------------------------------------------------------

double saturated_vapour_pressure(double temperature_c) {
  if (!(temperature_c > -237.3)) {
    throw SingularityError("temperature " + format_real(temperature_c) + " C is at or below -237.3 C");
  }
  return 610.78 * std::exp(temperature_c / (temperature_c + 237.3) * 17.2694);
}

double vapour_pressure_deficit(double temperature_c, double relative_humidity_pct) {
  if (!(relative_humidity_pct >= 0.0 && relative_humidity_pct <= 100.0)) {
    throw RangeError("relative humidity " + format_real(relative_humidity_pct) + " % outside [0, 100]");
  }
  return saturated_vapour_pressure(temperature_c) * (1.0 - relative_humidity_pct / 100.0);
}

TimeSeriesGrid vpd_transform(const TimeSeriesGrid& temperature, const TimeSeriesGrid& rel_humidity) {
  require_same_geometry(temperature, rel_humidity);
  TimeSeriesGrid out = temperature;
  out.offsets.reset();
  for (Eigen::Index j = 0; j < temperature.channels(); ++j) {
    for (Eigen::Index k = 0; k < temperature.snapshots(); ++k) {
      const double t = temperature.values(j, k);
      const double rh = rel_humidity.values(j, k);
      out.values(j, k) = (std::isnan(t) || std::isnan(rh)) ? kNaN : vapour_pressure_deficit(t, rh);
    }
  }
  return out;
}

// ---------------------------------------------------------------------------
// Synthetic signals
// ---------------------------------------------------------------------------

void SynthSpec::validate() const {
  if (channels < 1) throw RangeError("synth: channels must be >= 1");
  if (snapshots < 2) throw RangeError("synth: K must be >= 2");
  if (!(dt > 0.0)) throw RangeError("synth: dt must be > 0");
  if (!(noise_sigma >= 0.0)) throw RangeError("synth: noise_sigma must be >= 0");
  for (const auto& pair : mode_pairs) {
    if (pair.frequency >= 0.5) {
      throw NyquistError("synth: frequency " + format_real(pair.frequency) + " cycles/sample is at or above Nyquist");
    }
    if (!(pair.frequency > 0.0)) throw RangeError("synth: frequency must be > 0");
    if (!(pair.amplitude > 0.0)) throw RangeError("synth: amplitude must be > 0");
    if (static_cast<Eigen::Index>(pair.channel_shape.size()) != channels) {
      throw DimensionError("synth: channel_shape length must equal channels");
    }
  }
}

TimeSeriesGrid synth_generate(const SynthSpec& spec) {
  spec.validate();
  TimeSeriesGrid grid;
  grid.values = Eigen::MatrixXd::Zero(spec.channels, spec.snapshots);
  grid.dt = spec.dt;
  grid.t0 = spec.t0;
  for (Eigen::Index j = 0; j < spec.channels; ++j) grid.channel_names.push_back("ch" + std::to_string(j + 1));

  const double two_pi = 2.0 * std::acos(-1.0);
  for (const auto& pair : spec.mode_pairs) {
    const Eigen::Map<const Eigen::VectorXd> shape(pair.channel_shape.data(), spec.channels);
    for (Eigen::Index k = 0; k < spec.snapshots; ++k) {
      const double kd = static_cast<double>(k);
      const double temporal =
          2.0 * pair.amplitude * std::exp(pair.growth_rate * kd) * std::cos(two_pi * pair.frequency * kd + pair.phase);
      grid.values.col(k) += temporal * shape;
    }
  }

  if (spec.noise_sigma > 0.0) {
    std::mt19937_64 rng(spec.seed);
    std::normal_distribution<double> noise(0.0, spec.noise_sigma);
    for (Eigen::Index k = 0; k < spec.snapshots; ++k) {
      for (Eigen::Index j = 0; j < spec.channels; ++j) grid.values(j, k) += noise(rng);
    }
  }
  return grid;
}

}  // namespace hodmd
