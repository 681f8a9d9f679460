#pragma once

#include <cmath>
#include <vector>

#include "diraclab/types.hpp"

namespace diraclab {

/// All eigenvalues of a dense complex matrix (LAPACK zgeev, no vectors),
/// in solver order. Throws ComputationalError on non-convergence.
std::vector<Complex> general_eigenvalues(const CMatrix& a);

/// exp(h*A) for skew-adjoint A, via the unitary eigendecomposition of the
/// Hermitian matrix iA. The result is unitary to machine precision.
CMatrix exp_skew_adjoint(const CMatrix& a, double h);

/// exp(i*tau*H) for Hermitian H.
CMatrix exp_i_hermitian(const CMatrix& h, double tau);

/// Scaling-and-squaring exponential with a diagonal [6/6] Pade approximant.
/// Works for any square Eigen matrix type, including fixed 2x2.
template <typename Matrix>
Matrix expm_pade(const Matrix& a) {
  constexpr double c[] = {1.0,
                          1.0 / 2.0,
                          5.0 / 44.0,
                          1.0 / 66.0,
                          1.0 / 792.0,
                          1.0 / 15840.0,
                          1.0 / 665280.0};
  const double norm = a.cwiseAbs().rowwise().sum().maxCoeff();
  int squarings = 0;
  if (norm > 0.5) squarings = static_cast<int>(std::ceil(std::log2(norm / 0.5)));
  const Matrix s = a / std::ldexp(1.0, squarings);
  const auto id = Matrix::Identity(a.rows(), a.cols());
  const Matrix s2 = s * s;
  const Matrix s4 = s2 * s2;
  const Matrix s6 = s4 * s2;
  const Matrix even = c[0] * id + c[2] * s2 + c[4] * s4 + c[6] * s6;
  const Matrix odd = s * (c[1] * id + c[3] * s2 + c[5] * s4);
  Matrix r = (even - odd).partialPivLu().solve(even + odd);
  for (int i = 0; i < squarings; ++i) r = r * r;
  return r;
}

}  // namespace diraclab
