#pragma once

#include "hodmd/grid.hpp"
#include "hodmd/ingest.hpp"
#include "hodmd/numerics.hpp"

#include <Eigen/Dense>

#include <complex>
#include <optional>
#include <string>
#include <vector>

namespace hodmd {

using Complex = std::complex<double>;

inline constexpr double kSecondsPerDay = 86400.0;

/// Consecutive-snapshot matrices: X2 column c is the snapshot after X1 column c.
struct SnapshotPair {
  Eigen::MatrixXd X1;
  Eigen::MatrixXd X2;
  double dt = 1.0;
};

/// Mode expansion v_k = sum_m a_m u_m exp((delta_m + i omega_m) k dt) plus
/// the per-channel offsets removed by centering.
struct DmdSpectrum {
  Eigen::MatrixXcd modes;       // J x M, unit-norm columns
  Eigen::VectorXcd amplitudes;  // M
  Eigen::VectorXd growth_rates; // M, 1/s
  Eigen::VectorXd frequencies;  // M, rad/s
  double dt = 1.0;
  double t0 = 0.0;
  Eigen::VectorXd offsets;  // J
  Eigen::Index num_snapshots = 0;  // training window length K
  std::vector<std::string> channel_names;

  Eigen::Index d = 1;
  double eps1 = 0.0;
  double eps2 = 0.0;
  bool fb = false;
  bool fb_fallback = false;
  std::vector<std::string> warnings;

  Eigen::Index size() const { return amplitudes.size(); }
  Eigen::Index channels() const { return modes.rows(); }

  /// Continuous-time eigenvalue delta + i omega.
  Complex continuous_eigenvalue(Eigen::Index m) const { return {growth_rates[m], frequencies[m]}; }
  /// One-step multiplier exp((delta + i omega) dt).
  Complex discrete_eigenvalue(Eigen::Index m) const { return std::exp(continuous_eigenvalue(m) * dt); }

  double cycles_per_sample(Eigen::Index m) const;
  double cycles_per_day(Eigen::Index m) const;
  double growth_per_sample(Eigen::Index m) const { return growth_rates[m] * dt; }

  /// Copy holding only the listed modes, in the given order.
  DmdSpectrum select(const std::vector<Eigen::Index>& indices) const;
};

struct HodmdOptions {
  Eigen::Index d = 1;
  double eps1 = 0.0;
  /// Tolerance of the second (delay-embedded) truncation; defaults to eps1.
  std::optional<double> eps2;
  bool fb = true;

  double effective_eps2() const { return eps2.value_or(eps1); }
};

struct OperatorFit {
  Eigen::MatrixXd op;
  bool fb_applied = false;
  /// Set when fb was requested but the forward operator was used instead.
  std::optional<std::string> fallback_reason;
};

SnapshotPair build_snapshot_pair(const Eigen::MatrixXd& snapshots, double dt = 1.0);
SnapshotPair build_snapshot_pair(const TimeSeriesGrid& grid);

/// Block-Hankel stack: block-row b of output column c is column c + b of the
/// input. Shape (N d) x (K - d + 1).
Eigen::MatrixXd delay_embed(const Eigen::MatrixXd& reduced, Eigen::Index d);

/// Least-squares operator with A X1 ~ X2. With `fb`, the forward and backward
/// fits are combined as sqrt(A_f A_b^{-1}); if the backward fit cannot be
/// inverted or the square root hits the branch cut, the forward fit is
/// returned and `fallback_reason` says why.
OperatorFit fit_operator(const SnapshotPair& pair, bool fb);

/// Full-trajectory amplitude fit: minimises sum_k || x_k - sum_m a_m q_m mu_m^k ||^2
/// over all columns of `snapshots`. `modes` and `snapshots` must share a row
/// space (both physical or both reduced coordinates).
Eigen::VectorXcd compute_amplitudes(const Eigen::MatrixXcd& modes, const Eigen::VectorXcd& eigenvalues,
                                    const Eigen::MatrixXd& snapshots);

/// Higher-order DMD of a gap-free (normally centred) grid.
///
///  1. truncated SVD of the snapshots with eps1, reduced snapshots S Vt;
///  2. delay embedding with d blocks;
///  3. second truncated SVD with eps2 (skipped for d == 1);
///  4. operator fit on consecutive reduced columns, optionally forward-backward;
///  5. eigenvalues mu give delta = ln|mu| / dt and omega = arg(mu) / dt;
///  6. modes are the first embedding block of each eigenvector lifted through U;
///  7. amplitudes by `compute_amplitudes` over the whole window.
///
/// Eigenvalues with |mu| < 1e-12 are dropped.
DmdSpectrum hodmd(const TimeSeriesGrid& grid, const HodmdOptions& options);

/// The exact expansion a synthetic signal was generated from (two conjugate
/// modes per pair, zero offsets).
DmdSpectrum spectrum_from_synth(const SynthSpec& spec);

}  // namespace hodmd
