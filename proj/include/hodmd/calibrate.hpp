#pragma once

#include "hodmd/grid.hpp"
#include "hodmd/hodmd.hpp"
#include "hodmd/mode_select.hpp"

#include <Eigen/Dense>

#include <iosfwd>
#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace hodmd {

/// 3 days at 10-minute sampling.
inline constexpr Eigen::Index kDefaultHorizon = 432;

struct CalibrationConfig {
  HodmdOptions hodmd;  // d or eps1 is overwritten by the sweep
  Eigen::Index horizon = kDefaultHorizon;
  double growth_limit = kDefaultGrowthLimit;
  /// Elbow truncation applied before forecasting; empty keeps every
  /// non-transient mode.
  std::optional<std::size_t> num_pairs;
  /// Worker threads; 0 reads HODMD_THREADS, falling back to the hardware count.
  unsigned threads = 0;
};

struct CalibrationTable {
  std::string swept_parameter;  // "d" or "eps1"
  std::vector<double> values;
  std::vector<std::string> channel_names;
  /// Human-readable description of the parameters held fixed.
  std::vector<std::pair<std::string, std::string>> fixed;
  Eigen::MatrixXd scores;  // sweep length x J, RRMSE percent, NaN where failed
  std::vector<bool> failed;
  std::vector<std::string> errors;                 // per row, empty if scored
  std::vector<std::vector<std::string>> warnings;  // per row
};

/// First K - horizon samples for training, the last `horizon` for testing.
std::pair<TimeSeriesGrid, TimeSeriesGrid> holdout_split(const TimeSeriesGrid& grid, Eigen::Index horizon);

struct CellResult {
  Eigen::VectorXd scores;
  std::vector<std::string> warnings;
};

/// One calibration cell: centre the training grid, decompose, rank, truncate,
/// forecast the horizon and score against `test` in physical units. Only
/// `train` is visible to the fit.
CellResult score_cell(const TimeSeriesGrid& train, const TimeSeriesGrid& test, const HodmdOptions& options,
                      const CalibrationConfig& config);

/// Throws `ValidationError` for an empty list. Failing cells are recorded and
/// the sweep continues. Rows are in the order of `d_values`.
CalibrationTable sweep_d(const TimeSeriesGrid& grid, const std::vector<Eigen::Index>& d_values,
                         const CalibrationConfig& config);

/// eps2 follows each eps1 unless `config.hodmd.eps2` is set.
CalibrationTable sweep_eps(const TimeSeriesGrid& grid, const std::vector<double>& eps_values,
                           const CalibrationConfig& config);

void write_calibration_csv(std::ostream& out, const CalibrationTable& table);
/// Aligned plain-text table, one row per swept value.
std::string format_calibration_table(const CalibrationTable& table);

unsigned resolve_thread_count(unsigned requested);

}  // namespace hodmd
