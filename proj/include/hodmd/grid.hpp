#pragma once

#include <Eigen/Dense>

#include <optional>
#include <string>
#include <vector>

namespace hodmd {

/// How timestamps were written in the source file. Output mirrors it.
enum class TimestampFormat { EpochSeconds, Iso8601 };

/// Uniformly sampled multi-channel series. Rows are channels (spatial
/// dimension J), columns are snapshots (K). Missing samples are NaN until
/// `fill_gaps` has run.
struct TimeSeriesGrid {
  std::vector<std::string> channel_names;
  Eigen::MatrixXd values;  // J x K
  double t0 = 0.0;         // epoch seconds
  double dt = 1.0;         // seconds
  std::optional<Eigen::VectorXd> offsets;
  TimestampFormat timestamp_format = TimestampFormat::EpochSeconds;

  Eigen::Index channels() const { return values.rows(); }
  Eigen::Index snapshots() const { return values.cols(); }

  /// Absolute time (epoch seconds) of snapshot `k`.
  double time_at(Eigen::Index k) const { return t0 + static_cast<double>(k) * dt; }

  bool has_missing() const { return !values.allFinite(); }
};

/// Throws `ClockMismatchError` or `DimensionError` if the two grids do not
/// share shape, t0 and dt.
void require_same_geometry(const TimeSeriesGrid& a, const TimeSeriesGrid& b);

/// Columns [first, first + count) as a new grid with a shifted clock.
TimeSeriesGrid slice_columns(const TimeSeriesGrid& grid, Eigen::Index first, Eigen::Index count);

}  // namespace hodmd
