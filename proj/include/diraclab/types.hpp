#pragma once

#include <complex>

#include <Eigen/Dense>

namespace diraclab {

using Complex = std::complex<double>;
using CMatrix = Eigen::MatrixXcd;
using CVector = Eigen::VectorXcd;
using RMatrix = Eigen::MatrixXd;

inline constexpr Complex kI{0.0, 1.0};

// Largest entry modulus, the norm used for all matrix-valued residuals.
inline double max_abs(const Eigen::Ref<const CMatrix>& a) {
  return a.size() == 0 ? 0.0 : a.cwiseAbs().maxCoeff();
}

}  // namespace diraclab
