#pragma once

// Shared fixtures for the unit, property and acceptance tests: seeded
// generators and reference implementations that do not call into the
// library's numerics.

#include "hodmd/hodmd.hpp"
#include "hodmd/ingest.hpp"

#include <Eigen/Dense>
#include <boost/multiprecision/cpp_dec_float.hpp>

#include <algorithm>
#include <complex>
#include <cstdint>
#include <limits>
#include <random>
#include <string>
#include <vector>

namespace hodmd::test {

// ---------------------------------------------------------------------------
// Generators
// ---------------------------------------------------------------------------

/// Seeded source of random test inputs. Every property case constructs one
/// from its case number so failures can be replayed.
class Gen {
 public:
  explicit Gen(std::uint64_t seed) : engine_(seed * 0x9E3779B97F4A7C15ULL + 17) {}

  double uniform(double lo, double hi) { return std::uniform_real_distribution<double>(lo, hi)(engine_); }
  double normal(double mean = 0.0, double sigma = 1.0) { return std::normal_distribution<double>(mean, sigma)(engine_); }
  long integer(long lo, long hi) { return std::uniform_int_distribution<long>(lo, hi)(engine_); }
  bool coin(double p = 0.5) { return uniform(0.0, 1.0) < p; }

  Eigen::MatrixXd matrix(Eigen::Index rows, Eigen::Index cols, double sigma = 1.0) {
    Eigen::MatrixXd out(rows, cols);
    for (Eigen::Index c = 0; c < cols; ++c)
      for (Eigen::Index r = 0; r < rows; ++r) out(r, c) = normal(0.0, sigma);
    return out;
  }

  Eigen::VectorXd vector(Eigen::Index n, double sigma = 1.0) { return matrix(n, 1, sigma).col(0); }

  /// Real orthogonal matrix from the QR of a Gaussian matrix.
  Eigen::MatrixXd orthogonal(Eigen::Index n) {
    Eigen::HouseholderQR<Eigen::MatrixXd> qr(matrix(n, n));
    return qr.householderQ() * Eigen::MatrixXd::Identity(n, n);
  }

  /// Random synthetic specification with `pairs` well separated oscillations.
  SynthSpec synth(Eigen::Index channels, std::size_t pairs, Eigen::Index snapshots, double noise = 0.0) {
    SynthSpec spec;
    spec.channels = channels;
    spec.snapshots = snapshots;
    spec.dt = uniform(1.0, 900.0);
    spec.noise_sigma = noise;
    spec.seed = static_cast<std::uint64_t>(integer(0, 1'000'000));
    std::vector<double> used;
    while (spec.mode_pairs.size() < pairs) {
      const double f = uniform(0.01, 0.45);
      if (std::any_of(used.begin(), used.end(), [&](double u) { return std::abs(u - f) < 0.02; })) continue;
      used.push_back(f);
      ModePairSpec p;
      p.frequency = f;
      p.growth_rate = uniform(-2e-3, 2e-3);
      p.amplitude = uniform(0.2, 2.0);
      p.phase = uniform(-3.0, 3.0);
      p.channel_shape.resize(static_cast<std::size_t>(channels));
      for (auto& s : p.channel_shape) s = normal();
      spec.mode_pairs.push_back(p);
    }
    return spec;
  }

  TimeSeriesGrid grid(Eigen::Index channels, Eigen::Index snapshots) {
    TimeSeriesGrid g;
    g.values = matrix(channels, snapshots);
    g.dt = uniform(0.5, 1000.0);
    g.t0 = static_cast<double>(integer(0, 2'000'000'000));
    for (Eigen::Index j = 0; j < channels; ++j) g.channel_names.push_back("c" + std::to_string(j));
    return g;
  }

  std::mt19937_64& engine() { return engine_; }

 private:
  std::mt19937_64 engine_;
};

/// Case count for every property suite.
inline constexpr int kPropertyCases = 100;

// ---------------------------------------------------------------------------
// Reference signals
// ---------------------------------------------------------------------------

/// Three undamped pairs at 1/144, 1/72 and 1/5814 cycles per sample on three
/// channels at 10-minute sampling.
inline SynthSpec three_pair_spec(Eigen::Index snapshots = 4320, double noise_sigma = 0.0, std::uint64_t seed = 0) {
  SynthSpec spec;
  spec.channels = 3;
  spec.snapshots = snapshots;
  spec.dt = 600.0;
  spec.seed = seed;
  spec.noise_sigma = noise_sigma;
  spec.mode_pairs = {
      {1.0 / 144.0, 0.0, 1.0, 0.3, {1.0, 0.5, -0.2}},
      {1.0 / 72.0, 0.0, 0.6, 1.1, {0.2, 1.0, 0.4}},
      {1.0 / 5814.0, 0.0, 2.0, -0.4, {0.7, 0.3, 1.0}},
  };
  return spec;
}

inline TimeSeriesGrid from_matrix(const Eigen::MatrixXd& values, double dt = 1.0) {
  TimeSeriesGrid g;
  g.values = values;
  g.dt = dt;
  for (Eigen::Index j = 0; j < values.rows(); ++j) g.channel_names.push_back("c" + std::to_string(j));
  return g;
}

// ---------------------------------------------------------------------------
// Oracles
// ---------------------------------------------------------------------------

/// Direct evaluation of sum_m a_m u_m exp(lambda_m k dt), one exponential per
/// entry, plus offsets.
inline Eigen::MatrixXd expansion_oracle(const DmdSpectrum& s, Eigen::Index first, Eigen::Index count) {
  Eigen::MatrixXd out(s.modes.rows(), count);
  for (Eigen::Index c = 0; c < count; ++c) {
    const double t = static_cast<double>(first + c) * s.dt;
    for (Eigen::Index j = 0; j < s.modes.rows(); ++j) {
      std::complex<double> v = 0.0;
      for (Eigen::Index m = 0; m < s.size(); ++m) {
        v += s.amplitudes[m] * s.modes(j, m) * std::exp(std::complex<double>(s.growth_rates[m], s.frequencies[m]) * t);
      }
      out(j, c) = v.real() + (s.offsets.size() ? s.offsets[j] : 0.0);
    }
  }
  return out;
}

/// Schmid-style standard DMD of consecutive snapshot columns: Jacobi SVD of X1,
/// projected operator U* X2 V S^-1, complex Schur-based eigenvalues.
inline Eigen::VectorXcd standard_dmd_oracle(const Eigen::MatrixXd& X) {
  const Eigen::Index K = X.cols();
  const Eigen::MatrixXd X1 = X.leftCols(K - 1);
  const Eigen::MatrixXd X2 = X.rightCols(K - 1);
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(X1, Eigen::ComputeThinU | Eigen::ComputeThinV);
  const Eigen::VectorXd& s = svd.singularValues();
  Eigen::Index r = 0;
  while (r < s.size() && s[r] > s[0] * 1e-13) ++r;
  const Eigen::MatrixXd U = svd.matrixU().leftCols(r);
  const Eigen::MatrixXd V = svd.matrixV().leftCols(r);
  const Eigen::MatrixXd Atilde = U.transpose() * X2 * V * s.head(r).cwiseInverse().asDiagonal();
  Eigen::ComplexEigenSolver<Eigen::MatrixXcd> ces(Atilde.cast<std::complex<double>>(), false);
  return ces.eigenvalues();
}

/// Largest distance in an optimal-by-greed matching of two eigenvalue
/// multisets; +inf if the sizes differ.
inline double multiset_distance(const Eigen::VectorXcd& a, const Eigen::VectorXcd& b, bool relative = false) {
  if (a.size() != b.size()) return std::numeric_limits<double>::infinity();
  std::vector<bool> used(static_cast<std::size_t>(b.size()), false);
  double worst = 0.0;
  for (Eigen::Index i = 0; i < a.size(); ++i) {
    double best = std::numeric_limits<double>::infinity();
    Eigen::Index arg = -1;
    for (Eigen::Index j = 0; j < b.size(); ++j) {
      if (used[static_cast<std::size_t>(j)]) continue;
      const double dist = std::abs(a[i] - b[j]);
      if (dist < best) {
        best = dist;
        arg = j;
      }
    }
    used[static_cast<std::size_t>(arg)] = true;
    worst = std::max(worst, relative ? best / std::max(std::abs(a[i]), 1e-300) : best);
  }
  return worst;
}

/// Naive O(K^2) DFT magnitude of one real sequence at integer bins 0..K/2.
inline std::vector<double> dft_magnitude(const Eigen::VectorXd& x) {
  const Eigen::Index K = x.size();
  std::vector<double> mag(static_cast<std::size_t>(K / 2 + 1));
  for (Eigen::Index f = 0; f <= K / 2; ++f) {
    long double re = 0.0L, im = 0.0L;
    for (Eigen::Index k = 0; k < K; ++k) {
      // Reduce f k modulo K first so the angle stays small and exact.
      const long double phase = -2.0L * 3.14159265358979323846264338327950288L *
                                static_cast<long double>((f * k) % K) / static_cast<long double>(K);
      re += x[k] * std::cos(phase);
      im += x[k] * std::sin(phase);
    }
    mag[static_cast<std::size_t>(f)] = static_cast<double>(std::sqrt(re * re + im * im));
  }
  return mag;
}

/// Continuous-time eigenvalues mapped back to one-step multipliers.
// 50-digit decimal evaluation of the vapour pressure deficit.
inline double vpd_oracle(double t, double rh) {
  using boost::multiprecision::cpp_dec_float_50;
  const cpp_dec_float_50 T(t), RH(rh);
  const cpp_dec_float_50 svp = cpp_dec_float_50("610.78") * exp(T / (T + cpp_dec_float_50("237.3")) * cpp_dec_float_50("17.2694"));
  return static_cast<double>(svp * (1 - RH / 100));
}

inline Eigen::VectorXcd discrete_eigenvalues(const DmdSpectrum& s) {
  Eigen::VectorXcd mu(s.size());
  for (Eigen::Index m = 0; m < s.size(); ++m) mu[m] = s.discrete_eigenvalue(m);
  return mu;
}

}  // namespace hodmd::test
