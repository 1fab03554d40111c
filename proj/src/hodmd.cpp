#include "hodmd/hodmd.hpp"

#include "hodmd/error.hpp"

#include <cmath>
#include <numbers>
#include <string>

namespace hodmd {

namespace {

constexpr double kZeroEigenvalue = 1e-12;
// Above this many unknowns the amplitude fit switches from the stacked
// trajectory system to its normal equations.
constexpr Eigen::Index kStackedAmplitudeLimit = 128;

// mu^(k - ref), with ref = K - 1 for growing modes so that no entry overflows.
Eigen::MatrixXcd scaled_vandermonde(const Eigen::VectorXcd& eigenvalues, Eigen::Index snapshots,
                                    std::vector<Eigen::Index>& reference) {
  const Eigen::Index M = eigenvalues.size();
  reference.assign(static_cast<std::size_t>(M), 0);
  Eigen::MatrixXcd V(M, snapshots);
  for (Eigen::Index m = 0; m < M; ++m) {
    const Complex mu = eigenvalues[m];
    const Eigen::Index ref = std::abs(mu) > 1.0 ? snapshots - 1 : 0;
    reference[static_cast<std::size_t>(m)] = ref;
    const Complex log_mu = std::log(mu);
    for (Eigen::Index k = 0; k < snapshots; ++k) {
      V(m, k) = std::exp(static_cast<double>(k - ref) * log_mu);
    }
  }
  return V;
}

}  // namespace

double DmdSpectrum::cycles_per_sample(Eigen::Index m) const {
  return frequencies[m] * dt / (2.0 * std::numbers::pi);
}

double DmdSpectrum::cycles_per_day(Eigen::Index m) const {
  return frequencies[m] / (2.0 * std::numbers::pi) * kSecondsPerDay;
}

DmdSpectrum DmdSpectrum::select(const std::vector<Eigen::Index>& indices) const {
  DmdSpectrum out = *this;
  const auto M = static_cast<Eigen::Index>(indices.size());
  out.modes.resize(modes.rows(), M);
  out.amplitudes.resize(M);
  out.growth_rates.resize(M);
  out.frequencies.resize(M);
  for (Eigen::Index i = 0; i < M; ++i) {
    const Eigen::Index m = indices[static_cast<std::size_t>(i)];
    if (m < 0 || m >= size()) throw RangeError("mode index out of range");
    out.modes.col(i) = modes.col(m);
    out.amplitudes[i] = amplitudes[m];
    out.growth_rates[i] = growth_rates[m];
    out.frequencies[i] = frequencies[m];
  }
  return out;
}

SnapshotPair build_snapshot_pair(const Eigen::MatrixXd& snapshots, double dt) {
  const Eigen::Index K = snapshots.cols();
  if (K < 2) throw InsufficientDataError("snapshot pair needs K >= 2, got " + std::to_string(K));
  return SnapshotPair{snapshots.leftCols(K - 1), snapshots.rightCols(K - 1), dt};
}

SnapshotPair build_snapshot_pair(const TimeSeriesGrid& grid) {
  if (grid.has_missing()) throw ValidationError("snapshot pair requires a gap-free grid");
  return build_snapshot_pair(grid.values, grid.dt);
}

Eigen::MatrixXd delay_embed(const Eigen::MatrixXd& reduced, Eigen::Index d) {
  const Eigen::Index N = reduced.rows();
  const Eigen::Index K = reduced.cols();
  if (d < 1 || d > K - 1) {
    throw RangeError("delay count d=" + std::to_string(d) + " outside [1, " + std::to_string(K - 1) + "]");
  }
  const Eigen::Index cols = K - d + 1;
  Eigen::MatrixXd out(N * d, cols);
  for (Eigen::Index b = 0; b < d; ++b) {
    out.middleRows(b * N, N) = reduced.middleCols(b, cols);
  }
  return out;
}

OperatorFit fit_operator(const SnapshotPair& pair, bool fb) {
  if (pair.X1.cols() < 2 || pair.X1.rows() != pair.X2.rows() || pair.X1.cols() != pair.X2.cols()) {
    throw DimensionError("fit_operator: snapshot pair must have matching shapes and >= 2 columns");
  }
  OperatorFit fit;
  // A X1 = X2  <=>  X1^T A^T = X2^T
  fit.op = numerics::least_squares(Eigen::MatrixXd(pair.X1.transpose()), Eigen::MatrixXd(pair.X2.transpose())).transpose();
  if (!fb) return fit;

  const Eigen::MatrixXd backward =
      numerics::least_squares(Eigen::MatrixXd(pair.X2.transpose()), Eigen::MatrixXd(pair.X1.transpose())).transpose();
  Eigen::PartialPivLU<Eigen::MatrixXd> lu(backward);
  if (!(lu.rcond() > 1e-12)) {
    fit.fallback_reason = "backward operator is singular; using forward operator";
    return fit;
  }
  // A_f A_b^{-1} ~ A^2; root signs follow the forward spectrum.
  const auto forward_eig = numerics::eig(fit.op);
  const Eigen::MatrixXd product = fit.op * lu.inverse();
  try {
    Eigen::MatrixXd root = numerics::aligned_sqrt(product, forward_eig.values);
    if (!root.allFinite()) {
      fit.fallback_reason = "forward-backward square root is not finite; using forward operator";
      return fit;
    }
    fit.op = std::move(root);
    fit.fb_applied = true;
  } catch (const NumericalError& e) {
    fit.fallback_reason = std::string(e.what()) + "; using forward operator";
  }
  return fit;
}

Eigen::VectorXcd compute_amplitudes(const Eigen::MatrixXcd& modes, const Eigen::VectorXcd& eigenvalues,
                                    const Eigen::MatrixXd& snapshots) {
  const Eigen::Index n = modes.rows();
  const Eigen::Index M = modes.cols();
  const Eigen::Index K = snapshots.cols();
  if (eigenvalues.size() != M || snapshots.rows() != n) {
    throw DimensionError("compute_amplitudes: modes, eigenvalues and snapshots disagree in size");
  }
  if (M == 0) return Eigen::VectorXcd(0);

  std::vector<Eigen::Index> reference;
  const Eigen::MatrixXcd V = scaled_vandermonde(eigenvalues, K, reference);

  Eigen::VectorXcd scaled;
  if (M <= kStackedAmplitudeLimit) {
    Eigen::MatrixXcd A(n * K, M);
    for (Eigen::Index k = 0; k < K; ++k) {
      A.middleRows(k * n, n) = modes * V.col(k).asDiagonal();
    }
    const Eigen::MatrixXcd b = Eigen::Map<const Eigen::VectorXd>(snapshots.data(), n * K).cast<Complex>();
    scaled = numerics::least_squares(A, b).col(0);
  } else {
    const Eigen::MatrixXcd gram = modes.adjoint() * modes;
    const Eigen::MatrixXcd vv = V * V.adjoint();
    const Eigen::MatrixXcd P = gram.cwiseProduct(vv.conjugate());
    const Eigen::MatrixXcd projected = modes.adjoint() * snapshots.cast<Complex>();
    const Eigen::MatrixXcd q = V.conjugate().cwiseProduct(projected).rowwise().sum();
    scaled = numerics::least_squares(P, q).col(0);
  }

  Eigen::VectorXcd amplitudes(M);
  for (Eigen::Index m = 0; m < M; ++m) {
    const auto ref = reference[static_cast<std::size_t>(m)];
    amplitudes[m] = ref == 0 ? scaled[m] : scaled[m] * std::exp(-static_cast<double>(ref) * std::log(eigenvalues[m]));
  }
  return amplitudes;
}

DmdSpectrum hodmd(const TimeSeriesGrid& grid, const HodmdOptions& options) {
  if (grid.has_missing()) throw ValidationError("hodmd requires a gap-free grid (run fill_gaps first)");
  const Eigen::Index K = grid.snapshots();
  const Eigen::Index d = options.d;
  if (d < 1 || d > K / 2) {
    throw RangeError("delay count d=" + std::to_string(d) + " outside [1, K/2 = " + std::to_string(K / 2) + "]");
  }
  const double eps2 = options.effective_eps2();

  // Spatial reduction.
  const numerics::ReducedBasis spatial = numerics::truncated_svd(grid.values, options.eps1);
  const Eigen::Index N = spatial.rank;
  if (N * d < 1) throw DegenerateReductionError("spatial reduction retained no singular values");
  const Eigen::MatrixXd reduced = spatial.reduced();

  // Delay embedding and its conditioning truncation.
  Eigen::MatrixXd embedded_basis;  // (N d) x r, identity when d == 1
  Eigen::MatrixXd coords;          // r x (K - d + 1)
  if (d == 1) {
    coords = reduced;
  } else {
    const numerics::ReducedBasis delayed = numerics::truncated_svd(delay_embed(reduced, d), eps2);
    if (delayed.rank < 1) throw DegenerateReductionError("delay-embedded reduction retained no singular values");
    embedded_basis = delayed.U;
    coords = delayed.reduced();
  }

  const OperatorFit fit = fit_operator(build_snapshot_pair(coords, grid.dt), options.fb);
  const numerics::EigenDecomposition ed = numerics::eig(fit.op);

  std::vector<Eigen::Index> keep;
  for (Eigen::Index i = 0; i < ed.values.size(); ++i) {
    if (std::abs(ed.values[i]) >= kZeroEigenvalue) keep.push_back(i);
  }
  const auto M = static_cast<Eigen::Index>(keep.size());
  if (M == 0) throw DegenerateReductionError("all operator eigenvalues are zero");

  Eigen::VectorXcd mu(M);
  Eigen::MatrixXcd w(ed.vectors.rows(), M);
  for (Eigen::Index i = 0; i < M; ++i) {
    mu[i] = ed.values[keep[static_cast<std::size_t>(i)]];
    w.col(i) = ed.vectors.col(keep[static_cast<std::size_t>(i)]);
  }

  // First embedding block, in spatially reduced coordinates.
  Eigen::MatrixXcd reduced_modes = d == 1 ? w : Eigen::MatrixXcd(embedded_basis.topRows(N) * w);
  const Eigen::VectorXd norms = reduced_modes.colwise().norm();
  for (Eigen::Index m = 0; m < M; ++m) {
    if (norms[m] > 0.0) reduced_modes.col(m) /= norms[m];
  }

  DmdSpectrum spectrum;
  spectrum.modes = spatial.U * reduced_modes;
  spectrum.amplitudes = compute_amplitudes(reduced_modes, mu, reduced);

  // Conjugate eigenvalues come out adjacent from the real solver; make their
  // amplitudes exact conjugates.
  for (Eigen::Index m = 0; m + 1 < M; ++m) {
    if (mu[m].imag() > 0.0 && mu[m + 1] == std::conj(mu[m])) {
      const Complex a = 0.5 * (spectrum.amplitudes[m] + std::conj(spectrum.amplitudes[m + 1]));
      spectrum.amplitudes[m] = a;
      spectrum.amplitudes[m + 1] = std::conj(a);
      ++m;
    }
  }

  spectrum.growth_rates.resize(M);
  spectrum.frequencies.resize(M);
  for (Eigen::Index m = 0; m < M; ++m) {
    spectrum.growth_rates[m] = std::log(std::abs(mu[m])) / grid.dt;
    spectrum.frequencies[m] = std::arg(mu[m]) / grid.dt;
  }
  spectrum.dt = grid.dt;
  spectrum.t0 = grid.t0;
  spectrum.offsets = grid.offsets.value_or(Eigen::VectorXd::Zero(grid.channels()));
  spectrum.num_snapshots = K;
  spectrum.channel_names = grid.channel_names;
  spectrum.d = d;
  spectrum.eps1 = options.eps1;
  spectrum.eps2 = eps2;
  spectrum.fb = fit.fb_applied;
  if (fit.fallback_reason) {
    spectrum.fb_fallback = true;
    spectrum.warnings.push_back("forward-backward fallback: " + *fit.fallback_reason);
  }
  return spectrum;
}

DmdSpectrum spectrum_from_synth(const SynthSpec& spec) {
  spec.validate();
  const auto P = static_cast<Eigen::Index>(spec.mode_pairs.size());
  DmdSpectrum s;
  s.modes.resize(spec.channels, 2 * P);
  s.amplitudes.resize(2 * P);
  s.growth_rates.resize(2 * P);
  s.frequencies.resize(2 * P);
  for (Eigen::Index p = 0; p < P; ++p) {
    const auto& pair = spec.mode_pairs[static_cast<std::size_t>(p)];
    const Eigen::Map<const Eigen::VectorXd> shape(pair.channel_shape.data(), spec.channels);
    const double norm = shape.norm();
    const Complex a = pair.amplitude * norm * std::polar(1.0, pair.phase);
    const double omega = 2.0 * std::numbers::pi * pair.frequency / spec.dt;
    const double delta = pair.growth_rate / spec.dt;
    for (int c = 0; c < 2; ++c) {
      const Eigen::Index m = 2 * p + c;
      s.modes.col(m) = (shape / norm).cast<Complex>();
      s.amplitudes[m] = c == 0 ? a : std::conj(a);
      s.growth_rates[m] = delta;
      s.frequencies[m] = c == 0 ? omega : -omega;
    }
  }
  s.dt = spec.dt;
  s.t0 = spec.t0;
  s.offsets = Eigen::VectorXd::Zero(spec.channels);
  s.num_snapshots = spec.snapshots;
  for (Eigen::Index j = 0; j < spec.channels; ++j) s.channel_names.push_back("ch" + std::to_string(j + 1));
  return s;
}

}  // namespace hodmd
