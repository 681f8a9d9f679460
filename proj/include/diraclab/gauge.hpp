#pragma once

#include <vector>

#include "diraclab/derivative.hpp"
#include "diraclab/fields.hpp"
#include "diraclab/types.hpp"

namespace diraclab {

/// Sampled 2m x 2m matrices U(x_k) solving U' = (0 Q; -Q^* 0) U with
/// U(x_anchor) = I.
struct UnitaryFamily {
  int m = 0;
  Grid grid;
  std::vector<CMatrix> samples;
  int anchor_index = 0;
};

inline constexpr double kUnitarityTolerance = 1e-10;

/// Integrates the gauge ODE outward from the anchor in both directions with
/// the midpoint exponential U_{k+1} = exp(h A(x_{k+1/2})) U_k, where
/// A(x_{k+1/2}) uses the average of the two adjacent samples. Every step
/// factor is exactly unitary, so the family stays unitary up to roundoff.
/// Second order in h. Throws ComputationalError if the computed family
/// deviates from unitarity by more than kUnitarityTolerance.
UnitaryFamily compute_gauge_family(const MatrixPotential& q);

/// max_k ||U_k^* U_k - I||_inf
double unitarity_deviation(const UnitaryFamily& u);

/// max_k | |det U_k| - 1 |
double determinant_deviation(const UnitaryFamily& u);

/// V_k = sigma3 U_k sigma3
UnitaryFamily build_block_flip(const UnitaryFamily& u);

/// Applies the family pointwise; with `inverse`, applies U_k^* instead.
SpinorField apply_family(const UnitaryFamily& u, const SpinorField& f, bool inverse = false);

/// ||U^{-1} N(Q)[U G] - i G'|| / max(||G||, eps)
double diagonalization_residual(const MatrixPotential& q, const SpinorField& g,
                                DerivativeBackend backend = {});

/// ||V^{-1} M(Q)[U F] - i(F1', -F2')|| / max(||F||, eps)
double first_order_reduction_residual(const MatrixPotential& q, const SpinorField& f,
                                      DerivativeBackend backend = {});

}  // namespace diraclab
