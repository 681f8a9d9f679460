#include "diraclab/linalg.hpp"

#include <lapacke.h>

#include <string>

#include "diraclab/errors.hpp"

namespace diraclab {

std::vector<Complex> general_eigenvalues(const CMatrix& a) {
  if (a.rows() != a.cols()) throw DomainError("eigenvalues: matrix must be square");
  const lapack_int n = static_cast<lapack_int>(a.rows());
  if (n == 0) return {};
  CMatrix work = a;
  std::vector<Complex> w(n);
  const lapack_int info = LAPACKE_zgeev(
      LAPACK_COL_MAJOR, 'N', 'N', n, reinterpret_cast<lapack_complex_double*>(work.data()), n,
      reinterpret_cast<lapack_complex_double*>(w.data()), nullptr, 1, nullptr, 1);
  if (info != 0) {
    throw ComputationalError("eigenvalues: zgeev failed with info = " + std::to_string(info));
  }
  return w;
}

CMatrix exp_skew_adjoint(const CMatrix& a, double h) {
  // A = -iH with H = iA Hermitian, so exp(hA) = V exp(-i h Lambda) V^*.
  const CMatrix herm = kI * a;
  Eigen::SelfAdjointEigenSolver<CMatrix> eig(0.5 * (herm + herm.adjoint()));
  if (eig.info() != Eigen::Success) throw ComputationalError("exp: eigensolver failed");
  const auto& v = eig.eigenvectors();
  CVector phases = (eig.eigenvalues().cast<Complex>() * Complex(0.0, -h)).array().exp();
  return v * phases.asDiagonal() * v.adjoint();
}

CMatrix exp_i_hermitian(const CMatrix& h, double tau) {
  Eigen::SelfAdjointEigenSolver<CMatrix> eig(0.5 * (h + h.adjoint()));
  if (eig.info() != Eigen::Success) throw ComputationalError("exp: eigensolver failed");
  const auto& v = eig.eigenvectors();
  CVector phases = (eig.eigenvalues().cast<Complex>() * Complex(0.0, tau)).array().exp();
  return v * phases.asDiagonal() * v.adjoint();
}

}  // namespace diraclab
