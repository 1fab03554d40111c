#pragma once

#include "hodmd/grid.hpp"

#include <Eigen/Dense>

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <string>
#include <vector>

namespace hodmd {

// ---------------------------------------------------------------------------
// CSV input/output
// ---------------------------------------------------------------------------

/// Reads `timestamp,<ch1>,<ch2>,...` CSV. Timestamps are either integer
/// epoch seconds or ISO-8601 (`YYYY-MM-DDTHH:MM:SS`, optional `Z`, `T` may be a
/// space). Empty cells and `NaN` become missing (NaN) samples.
///
/// Sampling interval is the modal timestamp difference; every difference must
/// lie within 1% of it. Irregular files are refused, never resampled.
TimeSeriesGrid load_csv(const std::filesystem::path& path);
TimeSeriesGrid parse_csv(std::istream& in);

/// Writes the grid in the same schema `load_csv` reads, 17 significant digits.
/// `extra_columns` are appended after the channel columns (one value per
/// snapshot), e.g. a horizon marker.
struct ExtraColumn {
  std::string name;
  std::vector<std::string> cells;
};
void write_csv(std::ostream& out, const TimeSeriesGrid& grid, const std::vector<ExtraColumn>& extra_columns = {});
void save_csv(const std::filesystem::path& path, const TimeSeriesGrid& grid,
              const std::vector<ExtraColumn>& extra_columns = {});

/// Timestamp text in the grid's format.
std::string format_timestamp(double epoch_seconds, TimestampFormat format);
/// Parses either timestamp form; returns epoch seconds and which form matched.
std::pair<double, TimestampFormat> parse_timestamp(const std::string& text);

/// Repr with 17 significant digits; NaN is written as `NaN`.
std::string format_real(double value);

// ---------------------------------------------------------------------------
// Preprocessing
// ---------------------------------------------------------------------------

/// Interior gaps are linearly interpolated, leading/trailing gaps take the
/// nearest finite value. Finite samples are never changed.
TimeSeriesGrid fill_gaps(const TimeSeriesGrid& grid);

/// Subtracts each channel mean; removed means accumulate in `offsets`.
TimeSeriesGrid center(const TimeSeriesGrid& grid);

/// Adds `offsets[i]` back to row i.
Eigen::MatrixXd uncenter(const Eigen::MatrixXd& values, const Eigen::VectorXd& offsets);

// ---------------------------------------------------------------------------
// Vapour pressure deficit
// ---------------------------------------------------------------------------

/// Saturated vapour pressure in Pa for a temperature in degrees Celsius.
double saturated_vapour_pressure(double temperature_c);

/// VPD in Pa. Throws `RangeError` if RH is outside [0, 100] and
/// `SingularityError` if T <= -237.3.
double vapour_pressure_deficit(double temperature_c, double relative_humidity_pct);

/// Elementwise VPD over two aligned grids. Channel names come from the
/// temperature grid.
TimeSeriesGrid vpd_transform(const TimeSeriesGrid& temperature, const TimeSeriesGrid& rel_humidity);

// ---------------------------------------------------------------------------
// Synthetic signals
// ---------------------------------------------------------------------------

struct ModePairSpec {
  double frequency = 0.0;    // cycles per sample, in (0, 0.5)
  double growth_rate = 0.0;  // per sample
  double amplitude = 1.0;
  double phase = 0.0;  // radians
  std::vector<double> channel_shape;
};

struct SynthSpec {
  Eigen::Index channels = 1;
  std::vector<ModePairSpec> mode_pairs;
  double noise_sigma = 0.0;
  Eigen::Index snapshots = 2;
  double dt = 1.0;
  std::uint64_t seed = 0;
  double t0 = 0.0;

  /// Throws `NyquistError` / `RangeError` / `DimensionError`.
  void validate() const;
};

/// values[j,k] = sum over pairs of 2 a e^{g k} cos(2 pi f k + phase) shape[j]
/// plus N(0, noise_sigma) noise drawn from a seeded mt19937_64.
TimeSeriesGrid synth_generate(const SynthSpec& spec);

}  // namespace hodmd
