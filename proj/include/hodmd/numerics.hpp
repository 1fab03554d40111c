#pragma once

#include <Eigen/Dense>

#include <complex>

namespace hodmd::numerics {

using Complex = std::complex<double>;

/// Truncated thin SVD, X ~ U diag(S) Vt.
struct ReducedBasis {
  Eigen::MatrixXd U;   // J x N, orthonormal columns
  Eigen::VectorXd S;   // N, descending, > 0
  Eigen::MatrixXd Vt;  // N x K
  Eigen::Index rank = 0;
  double eps = 0.0;

  /// diag(S) * Vt, the reduced snapshot matrix.
  Eigen::MatrixXd reduced() const { return S.asDiagonal() * Vt; }
  Eigen::MatrixXd reconstruct() const { return U * S.asDiagonal() * Vt; }
};

/// Keeps singular values with sigma_n / sigma_1 > eps. With eps == 0 the
/// cutoff is the numerical rank, machine epsilon * max(rows, cols).
///
/// Throws `DimensionError` on an empty matrix, `ValidationError` on NaN/Inf,
/// `RangeError` if eps is outside [0, 1). An all-zero matrix yields rank 0.
ReducedBasis truncated_svd(const Eigen::MatrixXd& X, double eps);

struct EigenDecomposition {
  Eigen::VectorXcd values;
  Eigen::MatrixXcd vectors;  // unit-norm columns
};

/// General eigendecomposition. Real input keeps conjugate pairs exactly
/// conjugate (values and vectors).
EigenDecomposition eig(const Eigen::MatrixXd& A);
EigenDecomposition eig(const Eigen::MatrixXcd& A);

/// Minimum-norm least-squares solution of A X = B through an SVD
/// pseudo-inverse with relative cutoff 1e-12.
Eigen::MatrixXd least_squares(const Eigen::MatrixXd& A, const Eigen::MatrixXd& B);
Eigen::MatrixXcd least_squares(const Eigen::MatrixXcd& A, const Eigen::MatrixXcd& B);

/// Moore-Penrose pseudo-inverse, same cutoff as `least_squares`.
Eigen::MatrixXd pseudo_inverse(const Eigen::MatrixXd& A);

inline constexpr double kPinvCutoff = 1e-12;

/// Principal square root through the eigendecomposition. Throws
/// `BranchCutError` when an eigenvalue is zero or on the negative real axis,
/// or when the eigenvector matrix is numerically singular.
Eigen::MatrixXcd principal_sqrt(const Eigen::MatrixXcd& A);
/// Real input: returns the real principal root (imaginary parts cancel over
/// conjugate pairs).
Eigen::MatrixXd principal_sqrt(const Eigen::MatrixXd& A);

/// Square root whose eigenvalues are +-sqrt(lambda), each sign chosen nearer
/// to some entry of `reference`. Same branch-cut errors as `principal_sqrt`,
/// plus `BranchCutError` when the choice leaves a non-real result.
Eigen::MatrixXd aligned_sqrt(const Eigen::MatrixXd& A, const Eigen::VectorXcd& reference);

}  // namespace hodmd::numerics
