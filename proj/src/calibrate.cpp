#include "hodmd/calibrate.hpp"

#include "hodmd/error.hpp"
#include "hodmd/forecast.hpp"
#include "hodmd/ingest.hpp"

#include <algorithm>
#include <atomic>
#include <cstdio>
#include <cstdlib>
#include <functional>
#include <limits>
#include <ostream>
#include <sstream>
#include <thread>

namespace hodmd {

namespace {

struct RowOutcome {
  Eigen::VectorXd scores;
  bool failed = false;
  std::string error;
  std::vector<std::string> warnings;
};

// Runs `cell(i)` for i in [0, count) on up to `threads` workers. Results land
// in their own slot, so row order never depends on completion order.
std::vector<RowOutcome> run_cells(std::size_t count, unsigned threads,
                                  const std::function<RowOutcome(std::size_t)>& cell) {
  std::vector<RowOutcome> rows(count);
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i = next++; i < count; i = next++) rows[i] = cell(i);
  };
  const unsigned workers = std::max(1u, std::min<unsigned>(threads, static_cast<unsigned>(count)));
  {
    std::vector<std::jthread> pool;
    for (unsigned w = 1; w < workers; ++w) pool.emplace_back(worker);
    worker();
  }
  return rows;
}

RowOutcome guarded_cell(const TimeSeriesGrid& train, const TimeSeriesGrid& test, const HodmdOptions& options,
                        const CalibrationConfig& config) {
  RowOutcome row;
  try {
    CellResult cell = score_cell(train, test, options, config);
    row.scores = std::move(cell.scores);
    row.warnings = std::move(cell.warnings);
    if (!row.scores.allFinite()) {
      row.failed = true;
      row.error = "non-finite score";
    }
  } catch (const std::exception& e) {
    row.failed = true;
    row.error = e.what();
  }
  if (row.failed) row.scores = Eigen::VectorXd::Constant(train.channels(), std::numeric_limits<double>::quiet_NaN());
  return row;
}

CalibrationTable assemble(std::string parameter, std::vector<double> values, const TimeSeriesGrid& grid,
                          std::vector<RowOutcome> rows) {
  CalibrationTable table;
  table.swept_parameter = std::move(parameter);
  table.values = std::move(values);
  table.channel_names = grid.channel_names;
  table.scores.resize(static_cast<Eigen::Index>(rows.size()), grid.channels());
  for (std::size_t i = 0; i < rows.size(); ++i) {
    table.scores.row(static_cast<Eigen::Index>(i)) = rows[i].scores.transpose();
    table.failed.push_back(rows[i].failed);
    table.errors.push_back(std::move(rows[i].error));
    table.warnings.push_back(std::move(rows[i].warnings));
  }
  return table;
}

std::vector<std::pair<std::string, std::string>> describe_fixed(const CalibrationConfig& config, bool sweeping_d) {
  std::vector<std::pair<std::string, std::string>> fixed;
  if (sweeping_d) {
    fixed.emplace_back("eps1", format_real(config.hodmd.eps1));
    fixed.emplace_back("eps2", format_real(config.hodmd.effective_eps2()));
  } else {
    fixed.emplace_back("d", std::to_string(config.hodmd.d));
    fixed.emplace_back("eps2", config.hodmd.eps2 ? format_real(*config.hodmd.eps2) : "follows eps1");
  }
  fixed.emplace_back("fb", config.hodmd.fb ? "on" : "off");
  fixed.emplace_back("growth_limit", format_real(config.growth_limit));
  fixed.emplace_back("num_pairs", config.num_pairs ? std::to_string(*config.num_pairs) : "all");
  fixed.emplace_back("horizon", std::to_string(config.horizon));
  return fixed;
}

std::string csv_quote(const std::string& text) {
  std::string out = "\"";
  for (const char c : text) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + '"';
}

std::string join(const std::vector<std::string>& parts, const char* sep) {
  std::string out;
  for (std::size_t i = 0; i < parts.size(); ++i) {
    if (i) out += sep;
    out += parts[i];
  }
  return out;
}

std::string format_swept(const CalibrationTable& table, std::size_t i) {
  if (table.swept_parameter == "d") return std::to_string(static_cast<long long>(table.values[i]));
  return format_real(table.values[i]);
}

}  // namespace

std::pair<TimeSeriesGrid, TimeSeriesGrid> holdout_split(const TimeSeriesGrid& grid, Eigen::Index horizon) {
  const Eigen::Index K = grid.snapshots();
  if (horizon < 1 || horizon >= K) {
    throw RangeError("holdout horizon " + std::to_string(horizon) + " must lie in [1, K-1 = " +
                     std::to_string(K - 1) + "]");
  }
  return {slice_columns(grid, 0, K - horizon), slice_columns(grid, K - horizon, horizon)};
}

CellResult score_cell(const TimeSeriesGrid& train, const TimeSeriesGrid& test, const HodmdOptions& options,
                      const CalibrationConfig& config) {
  const DmdSpectrum spectrum = hodmd(center(train), options);
  const RankedSpectrum ranked = rank_and_pair(spectrum, config.growth_limit);
  if (ranked.pairs.empty()) throw NumericalError("every mode was excluded as transient");

  CellResult cell;
  cell.warnings = spectrum.warnings;
  cell.warnings.insert(cell.warnings.end(), ranked.warnings.begin(), ranked.warnings.end());

  std::size_t pairs = ranked.pairs.size();
  if (config.num_pairs) {
    if (*config.num_pairs > pairs) {
      cell.warnings.push_back("only " + std::to_string(pairs) + " pairs available; num_pairs clamped");
    } else {
      pairs = *config.num_pairs;
    }
  }
  const ForecastResult result = forecast(truncate(ranked, pairs), test.snapshots());
  cell.warnings.insert(cell.warnings.end(), result.warnings.begin(), result.warnings.end());
  cell.scores = rrmse(result.values, test.values);
  return cell;
}

CalibrationTable sweep_d(const TimeSeriesGrid& grid, const std::vector<Eigen::Index>& d_values,
                         const CalibrationConfig& config) {
  if (d_values.empty()) throw ValidationError("sweep_d: empty d list");
  if (grid.has_missing()) throw ValidationError("sweep_d: grid has missing values; run fill_gaps first");
  const auto [train, test] = holdout_split(grid, config.horizon);
  auto rows = run_cells(d_values.size(), resolve_thread_count(config.threads), [&](std::size_t i) {
    HodmdOptions options = config.hodmd;
    options.d = d_values[i];
    return guarded_cell(train, test, options, config);
  });
  std::vector<double> values(d_values.begin(), d_values.end());
  CalibrationTable table = assemble("d", std::move(values), grid, std::move(rows));
  table.fixed = describe_fixed(config, true);
  return table;
}

CalibrationTable sweep_eps(const TimeSeriesGrid& grid, const std::vector<double>& eps_values,
                           const CalibrationConfig& config) {
  if (eps_values.empty()) throw ValidationError("sweep_eps: empty eps1 list");
  for (const double eps : eps_values) {
    if (!(eps >= 0.0 && eps < 1.0)) throw RangeError("sweep_eps: eps1 " + format_real(eps) + " outside [0, 1)");
  }
  if (grid.has_missing()) throw ValidationError("sweep_eps: grid has missing values; run fill_gaps first");
  const auto [train, test] = holdout_split(grid, config.horizon);
  auto rows = run_cells(eps_values.size(), resolve_thread_count(config.threads), [&](std::size_t i) {
    HodmdOptions options = config.hodmd;
    options.eps1 = eps_values[i];
    return guarded_cell(train, test, options, config);
  });
  CalibrationTable table = assemble("eps1", eps_values, grid, std::move(rows));
  table.fixed = describe_fixed(config, false);
  return table;
}

void write_calibration_csv(std::ostream& out, const CalibrationTable& table) {
  out << table.swept_parameter;
  for (const auto& name : table.channel_names) out << ",rrmse_" << name;
  out << ",status,warnings\n";
  for (std::size_t i = 0; i < table.values.size(); ++i) {
    out << format_swept(table, i);
    for (Eigen::Index j = 0; j < table.scores.cols(); ++j) {
      out << ',' << format_real(table.scores(static_cast<Eigen::Index>(i), j));
    }
    out << ',' << (table.failed[i] ? csv_quote("failed: " + table.errors[i]) : "ok");
    out << ',' << csv_quote(join(table.warnings[i], "; ")) << '\n';
  }
}

std::string format_calibration_table(const CalibrationTable& table) {
  std::vector<std::vector<std::string>> cells;
  std::vector<std::string> header{table.swept_parameter};
  for (const auto& name : table.channel_names) header.push_back("RRMSE_" + name);
  header.push_back("flags");
  cells.push_back(header);
  for (std::size_t i = 0; i < table.values.size(); ++i) {
    std::vector<std::string> row{format_swept(table, i)};
    for (Eigen::Index j = 0; j < table.scores.cols(); ++j) {
      if (table.failed[i]) {
        row.emplace_back("failed");
      } else {
        char buf[32];
        std::snprintf(buf, sizeof buf, "%.2f", table.scores(static_cast<Eigen::Index>(i), j));
        row.emplace_back(buf);
      }
    }
    std::string flags;
    if (table.failed[i]) flags += "F";
    if (!table.warnings[i].empty()) flags += "W" + std::to_string(table.warnings[i].size());
    row.push_back(flags.empty() ? "-" : flags);
    cells.push_back(row);
  }

  std::vector<std::size_t> widths(header.size(), 0);
  for (const auto& row : cells) {
    for (std::size_t c = 0; c < row.size(); ++c) widths[c] = std::max(widths[c], row[c].size());
  }
  std::ostringstream out;
  for (std::size_t r = 0; r < cells.size(); ++r) {
    for (std::size_t c = 0; c < cells[r].size(); ++c) {
      if (c) out << " | ";
      out << std::string(widths[c] - cells[r][c].size(), ' ') << cells[r][c];
    }
    out << '\n';
    if (r == 0) {
      std::size_t total = 0;
      for (const auto w : widths) total += w;
      out << std::string(total + 3 * (widths.size() - 1), '-') << '\n';
    }
  }
  out << "fixed:";
  for (const auto& [key, value] : table.fixed) out << ' ' << key << '=' << value;
  out << '\n';
  return out.str();
}

unsigned resolve_thread_count(unsigned requested) {
  if (requested > 0) return requested;
  if (const char* env = std::getenv("HODMD_THREADS")) {
    char* end = nullptr;
    const long value = std::strtol(env, &end, 10);
    if (end != env && *end == '\0' && value > 0) return static_cast<unsigned>(value);
  }
  return std::max(1u, std::thread::hardware_concurrency());
}

}  // namespace hodmd
