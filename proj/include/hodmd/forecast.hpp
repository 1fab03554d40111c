#pragma once

#include "hodmd/hodmd.hpp"

#include <Eigen/Dense>

#include <string>
#include <vector>

namespace hodmd {

/// Relative imaginary residual above which an expansion is rejected.
inline constexpr double kImaginaryTolerance = 1e-8;

struct ForecastResult {
  std::vector<double> times;  // epoch seconds
  Eigen::MatrixXd values;     // J x H, physical units
  std::string spectrum_id;
  /// Index of the first extrapolated column (columns before it reconstruct
  /// the training window).
  Eigen::Index horizon_split = 0;
  std::vector<std::string> warnings;
};

/// Evaluates the expansion at sample indices first .. first + count - 1 and
/// adds the offsets back. Throws `ConjugateClosureError` if the imaginary
/// residual exceeds 1e-8 relative to the real part.
Eigen::MatrixXd evaluate_expansion(const DmdSpectrum& spectrum, Eigen::Index first, Eigen::Index count);

/// Samples K .. K + horizon - 1. Warns (never fails) when a retained mode's
/// envelope changes more than ten-fold over the horizon.
ForecastResult forecast(const DmdSpectrum& spectrum, Eigen::Index horizon_samples);

/// Training window followed by the forecast horizon, one code path.
ForecastResult reconstruct_and_forecast(const DmdSpectrum& spectrum, Eigen::Index horizon_samples);

/// Warning lines for modes whose |delta| * horizon * dt exceeds ln(10).
std::vector<std::string> divergence_warnings(const DmdSpectrum& spectrum, Eigen::Index horizon_samples);

/// Per-channel root-mean-square error.
Eigen::VectorXd rmse(const Eigen::MatrixXd& pred, const Eigen::MatrixXd& actual);
/// Per-channel 100 ||pred - actual|| / ||actual||. Throws
/// `UndefinedMetricError` when a reference channel is identically zero.
Eigen::VectorXd rrmse(const Eigen::MatrixXd& pred, const Eigen::MatrixXd& actual);

/// Stable textual identity of a spectrum (parameters and size), for reports.
std::string spectrum_id(const DmdSpectrum& spectrum);

}  // namespace hodmd
