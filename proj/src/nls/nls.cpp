#include "diraclab/nls.hpp"

#include <algorithm>
#include <cmath>

#include "diraclab/errors.hpp"
#include "diraclab/linalg.hpp"
#include "diraclab/operators.hpp"

namespace diraclab {

namespace {

double relative_asymmetry(const std::vector<Complex>& data, int m) {
  if (m == 1) return 0.0;
  const std::size_t block = static_cast<std::size_t>(m) * m;
  double asym = 0.0;
  double norm = 0.0;
  for (std::size_t off = 0; off < data.size(); off += block) {
    const Eigen::Map<const CMatrix> b(data.data() + off, m, m);
    asym = std::max(asym, max_abs(b - b.transpose()));
    norm = std::max(norm, max_abs(b));
  }
  return norm > 0.0 ? asym / norm : asym;
}

bool all_finite(const std::vector<Complex>& data) {
  return std::all_of(data.begin(), data.end(), [](Complex v) {
    return std::isfinite(v.real()) && std::isfinite(v.imag());
  });
}

EvolutionState make_state(const Grid& grid, int m, bool symmetric, std::vector<Complex> data,
                          double t, int steps) {
  const double defect = relative_asymmetry(data, m);
  const Symmetry mode = symmetric && defect <= MatrixPotential::kSymmetryTolerance
                            ? Symmetry::enforce
                            : Symmetry::allow_asymmetric;
  MatrixPotential q(grid, m, std::move(data), mode);
  const double norm = conserved_l2(q);
  return {t, std::move(q), norm, steps, defect};
}

void require_periodic(const Grid& grid) {
  if (!grid.periodic()) throw DomainError("nls: evolution requires a periodic grid");
}

}  // namespace

EvolutionState initial_state(MatrixPotential q0) {
  require_periodic(q0.grid());
  const double norm = conserved_l2(q0);
  return {0.0, std::move(q0), norm, 0, 0.0};
}

double conserved_l2(const MatrixPotential& q) {
  double sum = 0.0;
  for (const auto& v : q.data()) sum += std::norm(v);
  return q.grid().spacing() * sum;
}

SplitStepSolver::SplitStepSolver(const Grid& grid, int m, Reduction flow)
    : grid_(grid),
      m_(m),
      sign_(flow == Reduction::focusing ? 1.0 : -1.0),
      fft_(grid.size()),
      k2_(wavenumbers(grid)) {
  require_periodic(grid);
  if (m < 1) throw DomainError("nls: block dimension must be positive");
  for (auto& k : k2_) k *= k;
}

void SplitStepSolver::linear_flow(std::vector<Complex>& data, double tau) const {
  const int n = grid_.size();
  const int width = m_ * m_;
  std::vector<Complex> series(n);
  std::vector<Complex> spectrum(n);
  std::vector<Complex> multiplier(n);
  for (int j = 0; j < n; ++j) multiplier[j] = std::polar(1.0 / n, -0.5 * k2_[j] * tau);
  for (int e = 0; e < width; ++e) {
    for (int k = 0; k < n; ++k) series[k] = data[static_cast<std::size_t>(k) * width + e];
    fft_.forward(series, spectrum);
    for (int j = 0; j < n; ++j) spectrum[j] *= multiplier[j];
    fft_.backward(spectrum, series);
    for (int k = 0; k < n; ++k) data[static_cast<std::size_t>(k) * width + e] = series[k];
  }
}

void SplitStepSolver::nonlinear_flow(std::vector<Complex>& data, double tau) const {
  const double angle = sign_ * tau;
  if (m_ == 1) {
    for (auto& q : data) q *= std::polar(1.0, angle * std::norm(q));
    return;
  }
  const std::size_t block = static_cast<std::size_t>(m_) * m_;
  for (std::size_t off = 0; off < data.size(); off += block) {
    Eigen::Map<CMatrix> q(data.data() + off, m_, m_);
    const CMatrix h = q * q.adjoint();
    const CMatrix updated = exp_i_hermitian(h, angle) * q;
    q = updated;
  }
}

void SplitStepSolver::step(std::vector<Complex>& data, double dt) const {
  linear_flow(data, 0.5 * dt);
  nonlinear_flow(data, dt);
  linear_flow(data, 0.5 * dt);
}

EvolutionState linear_half_step(const EvolutionState& state, double tau) {
  const SplitStepSolver solver(state.q.grid(), state.q.m());
  std::vector<Complex> data = state.q.data();
  solver.linear_flow(data, tau);
  return make_state(state.q.grid(), state.q.m(), state.q.symmetric(), std::move(data),
                    state.t + tau, state.step_count);
}

EvolutionState nonlinear_step(const EvolutionState& state, double dt, Reduction flow) {
  const SplitStepSolver solver(state.q.grid(), state.q.m(), flow);
  std::vector<Complex> data = state.q.data();
  solver.nonlinear_flow(data, dt);
  return make_state(state.q.grid(), state.q.m(), state.q.symmetric(), std::move(data),
                    state.t + dt, state.step_count);
}

EvolutionResult evolve(const MatrixPotential& q0, double dt, int steps, Reduction flow,
                       int record_every) {
  require_periodic(q0.grid());
  if (!(dt > 0.0)) throw DomainError("evolve: dt must be positive");
  if (steps < 0) throw DomainError("evolve: step count must be nonnegative");
  if (record_every < 1) throw DomainError("evolve: record_every must be positive");

  const SplitStepSolver solver(q0.grid(), q0.m(), flow);
  EvolutionResult result;
  result.trajectory.push_back(initial_state(q0));
  // The raw buffer is carried across steps so that any symmetry loss
  // accumulates and shows up in the recorded defect.
  std::vector<Complex> data = q0.data();
  for (int j = 1; j <= steps; ++j) {
    solver.step(data, dt);
    if (!all_finite(data)) {
      result.halted = true;
      result.error = "non-finite sample at step " + std::to_string(j);
      return result;
    }
    if (j % record_every == 0 || j == steps) {
      result.trajectory.push_back(
          make_state(q0.grid(), q0.m(), q0.symmetric(), data, j * dt, j));
    }
  }
  return result;
}

IsospectralityReport isospectrality_experiment(const MatrixPotential& q0,
                                               const IsospectralityOptions& options) {
  if (options.snapshot_every < 1) throw DomainError("isospectral: snapshot_every must be positive");
  const Eigen::Index dim = static_cast<Eigen::Index>(q0.size()) * 2 * q0.m();
  if (dim > kDenseDimensionCap) throw DomainError("isospectral: dense dimension cap exceeded");

  const auto run = evolve(q0, options.dt, options.steps, options.flow, options.snapshot_every);
  IsospectralityReport report;
  report.halted = run.halted;
  report.error = run.error;
  report.empty = true;
  const Region region = above_imaginary(options.region_min_im);
  for (const auto& state : run.trajectory) {
    auto spectrum = dense_spectrum(assemble_dense(state.q, Expression::M, options.backend));
    const auto& reference = report.snapshots.empty() ? spectrum : report.snapshots.front().spectrum;
    const auto matching = spectrum_matching_distance(reference, spectrum, options.top_k, region);
    report.empty = report.empty && matching.empty;
    report.max_drift = std::max(report.max_drift, matching.distance);
    report.snapshots.push_back({state, std::move(spectrum), matching});
  }
  return report;
}

}  // namespace diraclab
