#pragma once

#include <string>
#include <vector>

#include "diraclab/derivative.hpp"
#include "diraclab/fields.hpp"
#include "diraclab/fourier.hpp"
#include "diraclab/lax.hpp"
#include "diraclab/spectral.hpp"

namespace diraclab {

/// Q(., t) of the matrix NLS flow
///   Q_t = (i/2) Q_xx + s i Q Q^* Q,   s = +1 focusing, -1 defocusing,
/// on a periodic grid.
struct EvolutionState {
  double t = 0.0;
  MatrixPotential q;
  double l2_norm = 0.0;
  int step_count = 0;
  /// max ||Q - Q^T||_inf / max ||Q||_inf of the evolved samples, measured
  /// before they are stored.
  double symmetry_defect = 0.0;
};

EvolutionState initial_state(MatrixPotential q0);

/// h * sum_k trace(Q(x_k) Q(x_k)^*)
double conserved_l2(const MatrixPotential& q);

/// Strang split-step integrator. Holds the FFT plans and wavenumbers for one
/// grid; the sample buffers it acts on use the MatrixPotential layout.
class SplitStepSolver {
 public:
  SplitStepSolver(const Grid& grid, int m, Reduction flow = Reduction::focusing);

  /// Exact flow of Q_t = (i/2) Q_xx over time tau: mode k gains
  /// exp(-i k^2 tau / 2).
  void linear_flow(std::vector<Complex>& data, double tau) const;
  /// Exact flow of Q_t = s i Q Q^* Q over time tau. Q Q^* is constant along
  /// it, so Q <- exp(i s tau Q Q^*) Q pointwise.
  void nonlinear_flow(std::vector<Complex>& data, double tau) const;
  /// One Strang step: linear(dt/2), nonlinear(dt), linear(dt/2).
  void step(std::vector<Complex>& data, double dt) const;

  const Grid& grid() const { return grid_; }
  int m() const { return m_; }

 private:
  Grid grid_;
  int m_;
  double sign_;
  FourierTransform fft_;
  std::vector<double> k2_;
};

/// Advances the linear sub-flow by tau (the Strang half step uses dt/2).
EvolutionState linear_half_step(const EvolutionState& state, double tau);
/// Advances the focusing nonlinear sub-flow by dt.
EvolutionState nonlinear_step(const EvolutionState& state, double dt,
                              Reduction flow = Reduction::focusing);

struct EvolutionResult {
  /// States at t = j dt for every j that is a multiple of record_every, plus
  /// the final state.
  std::vector<EvolutionState> trajectory;
  bool halted = false;
  std::string error;
};

/// Strang evolution. Stops early, with halted set and the partial trajectory
/// kept, if a step produces a non-finite sample.
EvolutionResult evolve(const MatrixPotential& q0, double dt, int steps,
                       Reduction flow = Reduction::focusing, int record_every = 1);

struct IsospectralityOptions {
  double dt = 1e-3;
  int steps = 1000;
  int snapshot_every = 250;
  /// Flow actually integrated; the tracked operator is always M(Q).
  Reduction flow = Reduction::focusing;
  DerivativeBackend backend{};
  double region_min_im = 0.1;
  int top_k = -1;
};

struct IsospectralSnapshot {
  EvolutionState state;
  SpectrumSample spectrum;
  MatchingResult matching;  // against the t = 0 snapshot
};

struct IsospectralityReport {
  std::vector<IsospectralSnapshot> snapshots;
  double max_drift = 0.0;
  /// Every filtered snapshot spectrum was empty.
  bool empty = false;
  bool halted = false;
  std::string error;
};

/// Evolves Q0 and, at every snapshot, compares the spectrum of the assembled
/// M(Q(t)) in the region Im z > region_min_im with that at t = 0.
IsospectralityReport isospectrality_experiment(const MatrixPotential& q0,
                                               const IsospectralityOptions& options);

}  // namespace diraclab
