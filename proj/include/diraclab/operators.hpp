#pragma once

#include <string>
#include <vector>

#include "diraclab/derivative.hpp"
#include "diraclab/fields.hpp"
#include "diraclab/types.hpp"

namespace diraclab {

/// Which differential expression an operator discretizes.
enum class Expression {
  M,      // M(Q)  = i(d/dx, -Q; -Q^*, -d/dx)
  M_neg,  // M(-Q) = i(d/dx,  Q;  Q^*, -d/dx)
  N,      // N(Q)  = i(d/dx, -Q;  Q^*,  d/dx)
};

const char* to_string(Expression e);

/// First-order 2m x 2m expression
///   G1 = i(upper_sign * F1' + upper_right * F2)
///   G2 = i(lower_left * F1  + lower_sign  * F2')
/// with pointwise m x m coefficient blocks (sample-contiguous, column-major).
/// Every Dirac-type expression in this library is an instance.
struct DiracForm {
  Grid grid;
  int m;
  double upper_sign;
  double lower_sign;
  std::vector<Complex> upper_right;
  std::vector<Complex> lower_left;

  static DiracForm from(const MatrixPotential& q, Expression e);
  /// The general AKNS expression M(P, Q) = i(d/dx, -Q; P, -d/dx).
  static DiracForm general(const Grid& grid, int m, const std::vector<CMatrix>& p,
                           const std::vector<CMatrix>& q);

  SpinorField apply(const SpinorField& f, const Differentiator& d) const;
};

SpinorField apply_M(const MatrixPotential& q, const SpinorField& f, bool negate,
                    DerivativeBackend backend);
SpinorField apply_N(const MatrixPotential& q, const SpinorField& f, DerivativeBackend backend);

/// Dense (2m n) x (2m n) matrix acting on stacked sample-major vectors.
struct OperatorMatrix {
  CMatrix entries;
  std::string label;
  Grid grid;
  int m;

  Eigen::Index dim() const { return entries.rows(); }
};

/// Assembles by direct stencil placement. Requires a periodic grid unless
/// allow_nonperiodic is set.
OperatorMatrix assemble_dense(const MatrixPotential& q, Expression e, DerivativeBackend backend,
                              bool allow_nonperiodic = false);
/// Assembles column by column, applying the expression to unit fields.
OperatorMatrix assemble_dense_by_columns(const MatrixPotential& q, Expression e,
                                         DerivativeBackend backend,
                                         bool allow_nonperiodic = false);
/// Matrix product a*b (apply b first).
OperatorMatrix compose(const OperatorMatrix& a, const OperatorMatrix& b);

/// ||M(-Q)[M(Q)F] - N(Q)[N(Q)F]|| / max(||F||, eps)
double factorization_residual(const MatrixPotential& q, const SpinorField& f,
                              DerivativeBackend backend);

/// |<Ju, M(Q)v> - <J M(Q)u, v>| / max(||u|| ||v||, eps). Periodic grids only.
double j_symmetry_residual(const MatrixPotential& q, const SpinorField& u, const SpinorField& v,
                           DerivativeBackend backend);

/// max |sigma1 conj(A) sigma1 - A^*|, i.e. the matrix form of J A J = A^*,
/// with sigma1 acting sample by sample.
double j_matrix_identity_residual(const OperatorMatrix& a);

/// max |A - A^*|
double hermitian_deviation(const OperatorMatrix& a);

struct PositivityReport {
  /// min Re(lambda) over the spectrum of M(-Q) M(Q).
  double gap = 0.0;
  /// max |lambda|, the scale for the relative tolerance.
  double norm_estimate = 0.0;
  /// min |lambda + 1|: kernel-triviality surrogate for M(-Q)M(Q) + I.
  double min_shifted_modulus = 0.0;

  bool nonnegative(double tol_pos = 1e-8) const { return gap >= -tol_pos * norm_estimate; }
  bool kernel_trivial(double tol = 1e-8) const { return min_shifted_modulus >= 1.0 - tol; }
};

inline constexpr double kPositivityTolerance = 1e-8;
inline constexpr Eigen::Index kDenseDimensionCap = 4096;

/// Dense eigen-analysis of the assembled composition M(-Q) M(Q).
PositivityReport positivity_report(const MatrixPotential& q, DerivativeBackend backend);
double positivity_gap(const MatrixPotential& q, DerivativeBackend backend);

}  // namespace diraclab
