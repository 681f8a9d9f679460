#include "diraclab/gauge.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "diraclab/errors.hpp"
#include "diraclab/involutions.hpp"
#include "diraclab/linalg.hpp"
#include "diraclab/operators.hpp"

namespace diraclab {

namespace {

constexpr double kGuard = 1e-300;

// (0 Q; -Q^* 0) at the midpoint between samples a and b.
CMatrix gauge_generator(const MatrixPotential& q, int a, int b) {
  const int m = q.m();
  const CMatrix mid = 0.5 * (q.sample(a) + q.sample(b));
  CMatrix g = CMatrix::Zero(2 * m, 2 * m);
  g.topRightCorner(m, m) = mid;
  g.bottomLeftCorner(m, m) = -mid.adjoint();
  return g;
}

double relative_l2(const SpinorField& diff, const SpinorField& ref) {
  return l2_norm(diff) / std::max(l2_norm(ref), kGuard);
}

}  // namespace

UnitaryFamily compute_gauge_family(const MatrixPotential& q) {
  const int n = q.size();
  const int m = q.m();
  const double h = q.grid().spacing();
  UnitaryFamily u{m, q.grid(), std::vector<CMatrix>(n), q.grid().anchor_index()};
  const int k0 = u.anchor_index;
  u.samples[k0] = CMatrix::Identity(2 * m, 2 * m);
  for (int k = k0; k + 1 < n; ++k) {
    u.samples[k + 1] = exp_skew_adjoint(gauge_generator(q, k, k + 1), h) * u.samples[k];
  }
  for (int k = k0; k > 0; --k) {
    u.samples[k - 1] = exp_skew_adjoint(gauge_generator(q, k - 1, k), -h) * u.samples[k];
  }
  const double deviation = unitarity_deviation(u);
  if (!(deviation <= kUnitarityTolerance)) {
    throw ComputationalError("gauge: unitarity lost (deviation " + std::to_string(deviation) +
                             ")");
  }
  return u;
}

double unitarity_deviation(const UnitaryFamily& u) {
  double worst = 0.0;
  for (const auto& s : u.samples) {
    worst = std::max(worst, max_abs(s.adjoint() * s - CMatrix::Identity(s.rows(), s.cols())));
  }
  return worst;
}

double determinant_deviation(const UnitaryFamily& u) {
  double worst = 0.0;
  for (const auto& s : u.samples) worst = std::max(worst, std::abs(std::abs(s.determinant()) - 1.0));
  return worst;
}

UnitaryFamily build_block_flip(const UnitaryFamily& u) {
  UnitaryFamily v = u;
  const int m = u.m;
  // sigma3 U sigma3 negates the off-diagonal blocks.
  for (auto& s : v.samples) {
    s.topRightCorner(m, m) *= -1.0;
    s.bottomLeftCorner(m, m) *= -1.0;
  }
  return v;
}

SpinorField apply_family(const UnitaryFamily& u, const SpinorField& f, bool inverse) {
  if (!(f.grid() == u.grid) || f.m() != u.m) {
    throw DomainError("apply_family: field lives on another grid");
  }
  SpinorField out = SpinorField::zero(f.grid(), f.m());
  for (int k = 0; k < f.size(); ++k) {
    out.sample(k) = inverse ? CVector(u.samples[k].adjoint() * f.sample(k))
                            : CVector(u.samples[k] * f.sample(k));
  }
  return out;
}

double diagonalization_residual(const MatrixPotential& q, const SpinorField& g,
                                DerivativeBackend backend) {
  require_same_layout(q, g, "diagonalization_residual");
  const Differentiator d(backend, q.grid());
  const UnitaryFamily u = compute_gauge_family(q);
  const SpinorField lhs =
      apply_family(u, DiracForm::from(q, Expression::N).apply(apply_family(u, g), d), true);
  SpinorField diff = d.apply(g);
  diff.stacked() = lhs.stacked() - kI * diff.stacked();
  return relative_l2(diff, g);
}

double first_order_reduction_residual(const MatrixPotential& q, const SpinorField& f,
                                      DerivativeBackend backend) {
  require_same_layout(q, f, "first_order_reduction_residual");
  const Differentiator d(backend, q.grid());
  const UnitaryFamily u = compute_gauge_family(q);
  const UnitaryFamily v = build_block_flip(u);
  SpinorField diff =
      apply_family(v, DiracForm::from(q, Expression::M).apply(apply_family(u, f), d), true);
  const SpinorField df = d.apply(f);
  for (int k = 0; k < f.size(); ++k) {
    diff.upper(k) -= kI * df.upper(k);
    diff.lower(k) += kI * df.lower(k);
  }
  return relative_l2(diff, f);
}

}  // namespace diraclab
