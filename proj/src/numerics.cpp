#include "hodmd/numerics.hpp"

#include "hodmd/error.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

namespace hodmd::numerics {

namespace {

template <typename Matrix>
void require_finite(const Matrix& A, const char* what) {
  if (A.size() == 0) throw DimensionError(std::string(what) + ": empty matrix");
  if (!A.allFinite()) throw ValidationError(std::string(what) + ": non-finite entries");
}

template <typename Matrix>
Matrix pinv_solve(const Matrix& A, const Matrix& B) {
  if (A.rows() != B.rows()) {
    throw DimensionError("least_squares: A has " + std::to_string(A.rows()) + " rows, B has " +
                         std::to_string(B.rows()));
  }
  require_finite(A, "least_squares");
  if (B.cols() > 0 && !B.allFinite()) throw ValidationError("least_squares: non-finite right-hand side");

  Eigen::BDCSVD<Matrix> svd(A, Eigen::ComputeThinU | Eigen::ComputeThinV);
  const auto& s = svd.singularValues();
  Matrix X = Matrix::Zero(A.cols(), B.cols());
  if (s.size() == 0 || s[0] == 0.0) return X;
  const double cutoff = kPinvCutoff * s[0];
  Eigen::Index rank = 0;
  while (rank < s.size() && s[rank] > cutoff) ++rank;
  const auto U = svd.matrixU().leftCols(rank);
  const auto V = svd.matrixV().leftCols(rank);
  const Eigen::VectorXd inv = s.head(rank).cwiseInverse();
  X.noalias() = V * (inv.asDiagonal() * (U.adjoint() * B));
  return X;
}

// Builds V diag(sqrt(lambda)) V^{-1} from an eigendecomposition. With a
// reference spectrum each root takes whichever sign lies nearer to it.
Eigen::MatrixXcd sqrt_from_eig(const EigenDecomposition& ed, double scale,
                               const Eigen::VectorXcd* reference = nullptr) {
  const double tol = 1e-14 * std::max(scale, std::numeric_limits<double>::min());
  Eigen::VectorXcd roots(ed.values.size());
  for (Eigen::Index i = 0; i < ed.values.size(); ++i) {
    const Complex lambda = ed.values[i];
    if (std::abs(lambda) <= tol) {
      throw BranchCutError("principal_sqrt: zero eigenvalue");
    }
    if (lambda.real() < 0.0 && std::abs(lambda.imag()) <= tol) {
      throw BranchCutError("principal_sqrt: eigenvalue on the negative real axis");
    }
    roots[i] = std::sqrt(lambda);
    if (reference && reference->size() > 0) {
      const auto distance = [&](Complex r) { return (reference->array() - r).abs().minCoeff(); };
      if (distance(-roots[i]) < distance(roots[i])) roots[i] = -roots[i];
    }
  }
  Eigen::PartialPivLU<Eigen::MatrixXcd> lu(ed.vectors);
  if (!(lu.rcond() > 1e-13)) {
    throw BranchCutError("principal_sqrt: eigenvector matrix is numerically singular");
  }
  return ed.vectors * roots.asDiagonal() * lu.inverse();
}

}  // namespace

ReducedBasis truncated_svd(const Eigen::MatrixXd& X, double eps) {
  require_finite(X, "truncated_svd");
  if (!(eps >= 0.0 && eps < 1.0)) throw RangeError("truncated_svd: eps must lie in [0, 1)");

  Eigen::BDCSVD<Eigen::MatrixXd> svd(X, Eigen::ComputeThinU | Eigen::ComputeThinV);
  const Eigen::VectorXd& s = svd.singularValues();

  ReducedBasis basis;
  basis.eps = eps;
  if (s.size() == 0 || s[0] == 0.0) {
    basis.U.resize(X.rows(), 0);
    basis.S.resize(0);
    basis.Vt.resize(0, X.cols());
    return basis;
  }
  const double ratio_floor =
      eps > 0.0 ? eps : std::numeric_limits<double>::epsilon() * static_cast<double>(std::max(X.rows(), X.cols()));
  Eigen::Index rank = 0;
  while (rank < s.size() && s[rank] / s[0] > ratio_floor) ++rank;

  basis.rank = rank;
  basis.U = svd.matrixU().leftCols(rank);
  basis.S = s.head(rank);
  basis.Vt = svd.matrixV().leftCols(rank).transpose();
  return basis;
}

EigenDecomposition eig(const Eigen::MatrixXd& A) {
  if (A.rows() != A.cols()) throw DimensionError("eig: matrix is not square");
  require_finite(A, "eig");
  Eigen::EigenSolver<Eigen::MatrixXd> solver(A, true);
  if (solver.info() != Eigen::Success) throw NumericalError("eig: QR iteration did not converge");
  EigenDecomposition out{solver.eigenvalues(), solver.eigenvectors()};
  out.vectors.colwise().normalize();
  return out;
}

EigenDecomposition eig(const Eigen::MatrixXcd& A) {
  if (A.rows() != A.cols()) throw DimensionError("eig: matrix is not square");
  require_finite(A, "eig");
  Eigen::ComplexEigenSolver<Eigen::MatrixXcd> solver(A, true);
  if (solver.info() != Eigen::Success) throw NumericalError("eig: QR iteration did not converge");
  EigenDecomposition out{solver.eigenvalues(), solver.eigenvectors()};
  out.vectors.colwise().normalize();
  return out;
}

Eigen::MatrixXd least_squares(const Eigen::MatrixXd& A, const Eigen::MatrixXd& B) { return pinv_solve(A, B); }

Eigen::MatrixXcd least_squares(const Eigen::MatrixXcd& A, const Eigen::MatrixXcd& B) { return pinv_solve(A, B); }

Eigen::MatrixXd pseudo_inverse(const Eigen::MatrixXd& A) {
  return pinv_solve(A, Eigen::MatrixXd::Identity(A.rows(), A.rows()).eval());
}

Eigen::MatrixXcd principal_sqrt(const Eigen::MatrixXcd& A) {
  const auto ed = eig(A);
  return sqrt_from_eig(ed, A.norm());
}

Eigen::MatrixXd principal_sqrt(const Eigen::MatrixXd& A) {
  const auto ed = eig(A);
  const Eigen::MatrixXcd root = sqrt_from_eig(ed, A.norm());
  return root.real();
}

Eigen::MatrixXd aligned_sqrt(const Eigen::MatrixXd& A, const Eigen::VectorXcd& reference) {
  const auto ed = eig(A);
  const Eigen::MatrixXcd root = sqrt_from_eig(ed, A.norm(), &reference);
  if (root.imag().norm() > 1e-8 * root.norm()) {
    throw BranchCutError("aligned_sqrt: branch choice breaks conjugate symmetry");
  }
  return root.real();
}

}  // namespace hodmd::numerics
