#include "diraclab/operators.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "diraclab/errors.hpp"
#include "diraclab/involutions.hpp"
#include "diraclab/linalg.hpp"

namespace diraclab {

namespace {

constexpr double kGuard = 1e-300;

using Block = Eigen::Map<const CMatrix>;

Block block_at(const std::vector<Complex>& data, int m, int k) {
  return Block(data.data() + static_cast<std::size_t>(k) * m * m, m, m);
}

std::vector<Complex> scaled(const std::vector<Complex>& data, double s) {
  std::vector<Complex> out(data);
  for (auto& v : out) v *= s;
  return out;
}

std::vector<Complex> adjoint_blocks(const MatrixPotential& q, double s) {
  const int m = q.m();
  std::vector<Complex> out(q.data().size());
  for (int k = 0; k < q.size(); ++k) {
    Eigen::Map<CMatrix>(out.data() + static_cast<std::size_t>(k) * m * m, m, m) =
        s * q.sample(k).adjoint();
  }
  return out;
}

std::vector<Complex> flatten(const std::vector<CMatrix>& blocks, double s) {
  std::vector<Complex> out;
  for (const auto& b : blocks) {
    for (Eigen::Index i = 0; i < b.size(); ++i) out.push_back(s * b.data()[i]);
  }
  return out;
}

void require_periodic(const Grid& grid, bool allow_nonperiodic, const char* where) {
  if (!grid.periodic() && !allow_nonperiodic) {
    throw DomainError(std::string(where) + ": requires a periodic grid");
  }
}

}  // namespace

const char* to_string(Expression e) {
  switch (e) {
    case Expression::M:
      return "M(Q)";
    case Expression::M_neg:
      return "M(-Q)";
    case Expression::N:
      return "N(Q)";
  }
  return "?";
}

DiracForm DiracForm::from(const MatrixPotential& q, Expression e) {
  switch (e) {
    case Expression::M:
      return {q.grid(), q.m(), 1.0, -1.0, scaled(q.data(), -1.0), adjoint_blocks(q, -1.0)};
    case Expression::M_neg:
      return {q.grid(), q.m(), 1.0, -1.0, q.data(), adjoint_blocks(q, 1.0)};
    case Expression::N:
      return {q.grid(), q.m(), 1.0, 1.0, scaled(q.data(), -1.0), adjoint_blocks(q, 1.0)};
  }
  throw DomainError("unknown expression");
}

DiracForm DiracForm::general(const Grid& grid, int m, const std::vector<CMatrix>& p,
                             const std::vector<CMatrix>& q) {
  if (p.size() != static_cast<std::size_t>(grid.size()) || q.size() != p.size()) {
    throw DomainError("dirac form: coefficient count does not match grid");
  }
  return {grid, m, 1.0, -1.0, flatten(q, -1.0), flatten(p, 1.0)};
}

SpinorField DiracForm::apply(const SpinorField& f, const Differentiator& d) const {
  if (!(f.grid() == grid) || f.m() != m) {
    throw DomainError("apply: potential and field live on different grids");
  }
  if (!(d.grid() == grid)) throw DomainError("apply: differentiator built for another grid");
  const SpinorField df = d.apply(f);
  SpinorField out = SpinorField::zero(grid, m);
  for (int k = 0; k < grid.size(); ++k) {
    out.upper(k) = kI * (upper_sign * df.upper(k) + block_at(upper_right, m, k) * f.lower(k));
    out.lower(k) = kI * (block_at(lower_left, m, k) * f.upper(k) + lower_sign * df.lower(k));
  }
  return out;
}

SpinorField apply_M(const MatrixPotential& q, const SpinorField& f, bool negate,
                    DerivativeBackend backend) {
  require_same_layout(q, f, "apply_M");
  const Differentiator d(backend, q.grid());
  return DiracForm::from(q, negate ? Expression::M_neg : Expression::M).apply(f, d);
}

SpinorField apply_N(const MatrixPotential& q, const SpinorField& f, DerivativeBackend backend) {
  require_same_layout(q, f, "apply_N");
  const Differentiator d(backend, q.grid());
  return DiracForm::from(q, Expression::N).apply(f, d);
}

OperatorMatrix assemble_dense(const MatrixPotential& q, Expression e, DerivativeBackend backend,
                              bool allow_nonperiodic) {
  require_periodic(q.grid(), allow_nonperiodic, "assemble_dense");
  const Differentiator diff(backend, q.grid());
  const DiracForm form = DiracForm::from(q, e);
  const RMatrix d = diff.matrix();
  const int n = q.size();
  const int m = q.m();
  const int w = 2 * m;
  CMatrix a = CMatrix::Zero(static_cast<Eigen::Index>(n) * w, static_cast<Eigen::Index>(n) * w);
  for (int j = 0; j < n; ++j) {
    for (int l = 0; l < n; ++l) {
      const double djl = d(j, l);
      if (djl == 0.0) continue;
      for (int c = 0; c < m; ++c) {
        a(j * w + c, l * w + c) += kI * (form.upper_sign * djl);
        a(j * w + m + c, l * w + m + c) += kI * (form.lower_sign * djl);
      }
    }
    const auto ur = block_at(form.upper_right, m, j);
    const auto ll = block_at(form.lower_left, m, j);
    a.block(j * w, j * w + m, m, m) += kI * ur;
    a.block(j * w + m, j * w, m, m) += kI * ll;
  }
  return {std::move(a), to_string(e), q.grid(), m};
}

OperatorMatrix assemble_dense_by_columns(const MatrixPotential& q, Expression e,
                                         DerivativeBackend backend, bool allow_nonperiodic) {
  require_periodic(q.grid(), allow_nonperiodic, "assemble_dense");
  const Differentiator diff(backend, q.grid());
  const DiracForm form = DiracForm::from(q, e);
  const Eigen::Index dim = static_cast<Eigen::Index>(q.size()) * 2 * q.m();
  CMatrix a(dim, dim);
  SpinorField basis = SpinorField::zero(q.grid(), q.m());
  for (Eigen::Index col = 0; col < dim; ++col) {
    basis.stacked().setZero();
    basis.stacked()[col] = 1.0;
    a.col(col) = form.apply(basis, diff).stacked();
  }
  return {std::move(a), to_string(e), q.grid(), q.m()};
}

OperatorMatrix compose(const OperatorMatrix& a, const OperatorMatrix& b) {
  if (a.dim() != b.dim()) throw DomainError("compose: dimension mismatch");
  return {a.entries * b.entries, a.label + b.label, a.grid, a.m};
}

double factorization_residual(const MatrixPotential& q, const SpinorField& f,
                              DerivativeBackend backend) {
  require_same_layout(q, f, "factorization_residual");
  const Differentiator d(backend, q.grid());
  const auto m_pos = DiracForm::from(q, Expression::M);
  const auto m_neg = DiracForm::from(q, Expression::M_neg);
  const auto n_q = DiracForm::from(q, Expression::N);
  const CVector lhs = m_neg.apply(m_pos.apply(f, d), d).stacked();
  const CVector rhs = n_q.apply(n_q.apply(f, d), d).stacked();
  const double h = q.grid().spacing();
  return std::sqrt(h) * (lhs - rhs).norm() / std::max(l2_norm(f), kGuard);
}

double j_symmetry_residual(const MatrixPotential& q, const SpinorField& u, const SpinorField& v,
                           DerivativeBackend backend) {
  require_same_layout(q, u, "j_symmetry_residual");
  require_same_layout(q, v, "j_symmetry_residual");
  require_periodic(q.grid(), false, "j_symmetry_residual");
  const Differentiator d(backend, q.grid());
  const auto form = DiracForm::from(q, Expression::M);
  const Complex left = inner_product(apply_conjugation_J(u), form.apply(v, d));
  const Complex right = inner_product(apply_conjugation_J(form.apply(u, d)), v);
  return std::abs(left - right) / std::max(l2_norm(u) * l2_norm(v), kGuard);
}

double j_matrix_identity_residual(const OperatorMatrix& a) {
  const int w = 2 * a.m;
  const Eigen::Index dim = a.dim();
  // sigma1 permutes entries (k, c) <-> (k, (c + m) mod 2m).
  auto swap = [&](Eigen::Index i) {
    const Eigen::Index k = i / w;
    const Eigen::Index c = i % w;
    return k * w + (c + a.m) % w;
  };
  double worst = 0.0;
  for (Eigen::Index col = 0; col < dim; ++col) {
    const Eigen::Index scol = swap(col);
    for (Eigen::Index row = 0; row < dim; ++row) {
      const Complex lhs = std::conj(a.entries(swap(row), scol));
      const Complex rhs = std::conj(a.entries(col, row));
      worst = std::max(worst, std::abs(lhs - rhs));
    }
  }
  return worst;
}

double hermitian_deviation(const OperatorMatrix& a) {
  return max_abs(a.entries - a.entries.adjoint());
}

PositivityReport positivity_report(const MatrixPotential& q, DerivativeBackend backend) {
  require_periodic(q.grid(), false, "positivity_gap");
  const Eigen::Index dim = static_cast<Eigen::Index>(q.size()) * 2 * q.m();
  if (dim > kDenseDimensionCap) throw DomainError("positivity_gap: dense dimension cap exceeded");
  const auto composition = compose(assemble_dense(q, Expression::M_neg, backend),
                                   assemble_dense(q, Expression::M, backend));
  const auto eigenvalues = general_eigenvalues(composition.entries);
  PositivityReport report;
  report.gap = std::numeric_limits<double>::infinity();
  report.min_shifted_modulus = std::numeric_limits<double>::infinity();
  for (const auto& z : eigenvalues) {
    report.gap = std::min(report.gap, z.real());
    report.norm_estimate = std::max(report.norm_estimate, std::abs(z));
    report.min_shifted_modulus = std::min(report.min_shifted_modulus, std::abs(z + 1.0));
  }
  return report;
}

double positivity_gap(const MatrixPotential& q, DerivativeBackend backend) {
  return positivity_report(q, backend).gap;
}

}  // namespace diraclab
