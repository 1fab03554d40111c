#include "hodmd/forecast.hpp"

#include "hodmd/error.hpp"

#include <cmath>
#include <sstream>

namespace hodmd {

namespace {

void require_same_shape(const Eigen::MatrixXd& pred, const Eigen::MatrixXd& actual, const char* what) {
  if (pred.rows() != actual.rows() || pred.cols() != actual.cols()) {
    throw DimensionError(std::string(what) + ": shape mismatch " + std::to_string(pred.rows()) + "x" +
                         std::to_string(pred.cols()) + " vs " + std::to_string(actual.rows()) + "x" +
                         std::to_string(actual.cols()));
  }
}

}  // namespace

Eigen::MatrixXd evaluate_expansion(const DmdSpectrum& spectrum, Eigen::Index first, Eigen::Index count) {
  const Eigen::Index J = spectrum.channels();
  const Eigen::Index M = spectrum.size();
  if (count < 0) throw RangeError("evaluate_expansion: negative sample count");

  // Each Vandermonde entry exp(k (delta + i omega) dt) depends only on its own
  // index, so overlapping ranges agree bit-for-bit.
  Eigen::MatrixXcd vandermonde(M, count);
  for (Eigen::Index m = 0; m < M; ++m) {
    const Complex step = spectrum.continuous_eigenvalue(m) * spectrum.dt;
    for (Eigen::Index i = 0; i < count; ++i) {
      vandermonde(m, i) = std::exp(static_cast<double>(first + i) * step);
    }
  }
  // Fixed summation order per entry; a library product would pick kernels by
  // shape and break the bit-for-bit guarantee.
  const Eigen::MatrixXcd weighted = spectrum.modes * spectrum.amplitudes.asDiagonal();
  Eigen::MatrixXcd z = Eigen::MatrixXcd::Zero(J, count);
  for (Eigen::Index i = 0; i < count; ++i) {
    for (Eigen::Index m = 0; m < M; ++m) {
      const Complex v = vandermonde(m, i);
      for (Eigen::Index j = 0; j < J; ++j) z(j, i) += weighted(j, m) * v;
    }
  }

  if (!z.allFinite()) throw NumericalError("expansion overflowed; a retained mode grows without bound");
  const double total = z.norm();
  const double imaginary = z.imag().norm();
  if (imaginary > kImaginaryTolerance * total) {
    std::ostringstream msg;
    msg << "imaginary residual " << imaginary / total << " exceeds " << kImaginaryTolerance
        << " relative; spectrum is not conjugate-closed";
    throw ConjugateClosureError(msg.str());
  }

  Eigen::MatrixXd values = z.real();
  if (spectrum.offsets.size() == J) values.colwise() += spectrum.offsets;
  return values;
}

std::vector<std::string> divergence_warnings(const DmdSpectrum& spectrum, Eigen::Index horizon_samples) {
  std::vector<std::string> warnings;
  const double span = static_cast<double>(horizon_samples) * spectrum.dt;
  for (Eigen::Index m = 0; m < spectrum.size(); ++m) {
    const double change = std::abs(spectrum.growth_rates[m]) * span;
    if (change > std::log(10.0)) {
      std::ostringstream msg;
      msg << "divergence: mode " << m << " (delta=" << spectrum.growth_rates[m] << " 1/s, "
          << spectrum.cycles_per_sample(m) << " cycles/sample) changes its envelope by e^" << change
          << " over the horizon";
      warnings.push_back(msg.str());
    }
  }
  return warnings;
}

ForecastResult forecast(const DmdSpectrum& spectrum, Eigen::Index horizon_samples) {
  if (horizon_samples < 1) throw RangeError("forecast horizon must be >= 1 sample");
  ForecastResult result;
  result.values = evaluate_expansion(spectrum, spectrum.num_snapshots, horizon_samples);
  for (Eigen::Index i = 0; i < horizon_samples; ++i) {
    result.times.push_back(spectrum.t0 + static_cast<double>(spectrum.num_snapshots + i) * spectrum.dt);
  }
  result.spectrum_id = spectrum_id(spectrum);
  result.horizon_split = 0;
  result.warnings = divergence_warnings(spectrum, horizon_samples);
  return result;
}

ForecastResult reconstruct_and_forecast(const DmdSpectrum& spectrum, Eigen::Index horizon_samples) {
  if (horizon_samples < 0) throw RangeError("forecast horizon must be >= 0 samples");
  const Eigen::Index total = spectrum.num_snapshots + horizon_samples;
  ForecastResult result;
  result.values = evaluate_expansion(spectrum, 0, total);
  for (Eigen::Index i = 0; i < total; ++i) {
    result.times.push_back(spectrum.t0 + static_cast<double>(i) * spectrum.dt);
  }
  result.spectrum_id = spectrum_id(spectrum);
  result.horizon_split = spectrum.num_snapshots;
  result.warnings = divergence_warnings(spectrum, horizon_samples);
  return result;
}

Eigen::VectorXd rmse(const Eigen::MatrixXd& pred, const Eigen::MatrixXd& actual) {
  require_same_shape(pred, actual, "rmse");
  if (pred.cols() == 0) throw UndefinedMetricError("rmse: no samples");
  return ((pred - actual).rowwise().squaredNorm() / static_cast<double>(pred.cols())).cwiseSqrt();
}

Eigen::VectorXd rrmse(const Eigen::MatrixXd& pred, const Eigen::MatrixXd& actual) {
  require_same_shape(pred, actual, "rrmse");
  Eigen::VectorXd out(pred.rows());
  for (Eigen::Index j = 0; j < pred.rows(); ++j) {
    const Eigen::RowVectorXd reference_row = actual.row(j);
    const Eigen::RowVectorXd error_row = pred.row(j) - actual.row(j);
    const double reference = reference_row.norm();
    if (!(reference > 0.0)) {
      throw UndefinedMetricError("rrmse: reference channel " + std::to_string(j) + " has zero norm");
    }
    out[j] = 100.0 * (error_row.norm() / reference);
  }
  return out;
}

std::string spectrum_id(const DmdSpectrum& spectrum) {
  std::ostringstream id;
  id << (spectrum.d == 1 ? "dmd" : "hodmd") << "(d=" << spectrum.d << ",eps1=" << spectrum.eps1
     << ",eps2=" << spectrum.eps2 << ",fb=" << (spectrum.fb ? "on" : "off") << ",M=" << spectrum.size() << ")";
  return id.str();
}

}  // namespace hodmd
