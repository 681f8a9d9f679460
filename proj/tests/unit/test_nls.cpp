#include <cmath>
#include <numbers>

#include <gtest/gtest.h>

#include "diraclab/nls.hpp"
#include "diraclab/potentials.hpp"
#include "oracles.hpp"

using namespace diraclab;

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

MatrixPotential plane_wave(const Grid& g, Complex a, double k, double t) {
  std::vector<Complex> data(g.size());
  for (int j = 0; j < g.size(); ++j) data[j] = oracle::plane_wave(a, k, g.point(j), t);
  return MatrixPotential(g, 1, data);
}

MatrixPotential soliton(const Grid& g, double amplitude, double t) {
  std::vector<Complex> data(g.size());
  for (int j = 0; j < g.size(); ++j) data[j] = oracle::soliton(amplitude, g.point(j), t);
  return MatrixPotential(g, 1, data);
}

double max_error(const MatrixPotential& a, const MatrixPotential& b) {
  double e = 0.0;
  for (std::size_t i = 0; i < a.data().size(); ++i) e = std::max(e, std::abs(a.data()[i] - b.data()[i]));
  return e;
}

double soliton_error(double dt) {
  const Grid g = make_grid(-20.0, 20.0, 1024, true);
  const int steps = static_cast<int>(std::lround(1.0 / dt));
  const auto r = evolve(soliton(g, 1.0, 0.0), dt, steps, Reduction::focusing, steps);
  return max_error(r.trajectory.back().q, soliton(g, 1.0, 1.0));
}

}  // namespace

TEST(LinearFlow, FourierModeGainsQuadraticPhase) {
  const Grid g = make_grid(0.0, kTwoPi, 32, true);
  const double tau = 0.37;
  const int k = 3;
  std::vector<Complex> data(32);
  for (int j = 0; j < 32; ++j) data[j] = std::exp(oracle::I * (k * g.point(j)));
  const auto out = linear_half_step(initial_state(MatrixPotential(g, 1, data)), tau);
  for (int j = 0; j < 32; ++j) {
    EXPECT_NEAR(std::abs(out.q.data()[j] - data[j] * std::exp(-oracle::I * (0.5 * k * k * tau))), 0.0,
                1e-13);
  }
  EXPECT_DOUBLE_EQ(out.t, tau);
}

TEST(LinearFlow, ConstantIsUnchanged) {
  const Grid g = make_grid(0.0, 5.0, 16, true);
  const auto q = sample_potential({ConstantShape{CMatrix::Constant(1, 1, Complex(0.4, 0.1))}}, g, 1);
  EXPECT_LE(max_error(linear_half_step(initial_state(q), 1.3).q, q), 1e-14);
}

TEST(NonlinearFlow, ScalarPhaseRotation) {
  const Grid g = make_grid(0.0, 1.0, 8, true);
  std::vector<Complex> data(8);
  for (int j = 0; j < 8; ++j) data[j] = Complex(0.1 * j, 0.5 - 0.05 * j);
  const MatrixPotential q(g, 1, data);
  const double dt = 0.2;
  const auto focusing = nonlinear_step(initial_state(q), dt, Reduction::focusing);
  const auto defocusing = nonlinear_step(initial_state(q), dt, Reduction::defocusing);
  for (int j = 0; j < 8; ++j) {
    const Complex phase = std::exp(oracle::I * (std::norm(data[j]) * dt));
    EXPECT_NEAR(std::abs(focusing.q.data()[j] - data[j] * phase), 0.0, 1e-15);
    EXPECT_NEAR(std::abs(defocusing.q.data()[j] - data[j] * std::conj(phase)), 0.0, 1e-15);
  }
}

TEST(NonlinearFlow, ZeroStaysZero) {
  const auto q = MatrixPotential::zero(make_grid(0.0, 1.0, 8, true), 2);
  const auto out = nonlinear_step(initial_state(q), 0.5);
  for (const auto& v : out.q.data()) EXPECT_EQ(v, Complex(0.0));
}

TEST(NonlinearFlow, MatrixCaseMatchesRungeKutta) {
  const Grid g = make_grid(0.0, 1.0, 4, true);
  CMatrix c(2, 2);
  c << Complex(0.7, 0.2), Complex(-0.3, 0.4), Complex(-0.3, 0.4), Complex(0.1, -0.9);
  const auto q = sample_potential({ConstantShape{c}}, g, 2);
  const double dt = 0.3;
  for (auto [flow, sign] : {std::pair{Reduction::focusing, 1.0}, std::pair{Reduction::defocusing, -1.0}}) {
    const CMatrix ref = oracle::rk4(
        [s = sign](const CMatrix& y) { return CMatrix(s * oracle::I * y * y.adjoint() * y); }, c, dt,
        2000);
    const auto out = nonlinear_step(initial_state(q), dt, flow);
    EXPECT_LE((out.q.sample(2) - ref).cwiseAbs().maxCoeff(), 1e-12);
  }
}

TEST(ConservedL2, ConstantAndMatrixExamples) {
  const Grid g = make_grid(0.0, 2.0, 8, true);
  const auto scalar = sample_potential({ConstantShape{CMatrix::Constant(1, 1, Complex(3.0, 4.0))}}, g, 1);
  EXPECT_NEAR(conserved_l2(scalar), 25.0 * 2.0, 1e-12);
  CMatrix c(2, 2);
  c << 1.0, Complex(0.0, 2.0), Complex(0.0, 2.0), 1.0;
  EXPECT_NEAR(conserved_l2(sample_potential({ConstantShape{c}}, g, 2)), 10.0 * 2.0, 1e-12);
}

TEST(Evolve, PlaneWaveMatchesClosedForm) {
  const Grid g = make_grid(0.0, kTwoPi, 256, true);
  const Complex a(0.8, 0.3);
  const auto r = evolve(plane_wave(g, a, 2.0, 0.0), 1e-3, 1000, Reduction::focusing, 250);
  ASSERT_FALSE(r.halted);
  ASSERT_EQ(r.trajectory.size(), 5u);
  EXPECT_EQ(r.trajectory.back().step_count, 1000);
  EXPECT_NEAR(r.trajectory.back().t, 1.0, 1e-12);
  EXPECT_LE(max_error(r.trajectory.back().q, plane_wave(g, a, 2.0, 1.0)), 1e-6);
}

TEST(Evolve, DefocusingPlaneWave) {
  const Grid g = make_grid(0.0, kTwoPi, 128, true);
  const Complex a(0.6, 0.0);
  const double k = 1.0;
  const double omega = 0.5 * k * k + std::norm(a);
  std::vector<Complex> expected(g.size());
  for (int j = 0; j < g.size(); ++j) expected[j] = a * std::exp(oracle::I * (k * g.point(j) - omega));
  const auto r = evolve(plane_wave(g, a, k, 0.0), 1e-3, 1000, Reduction::defocusing, 1000);
  EXPECT_LE(max_error(r.trajectory.back().q, MatrixPotential(g, 1, expected)), 1e-6);
}

TEST(Evolve, SolitonMatchesClosedForm) { EXPECT_LE(soliton_error(1e-3), 1e-5); }

TEST(Evolve, SolitonErrorIsSecondOrderInTime) {
  const double ratio = soliton_error(2e-3) / soliton_error(1e-3);
  EXPECT_GE(ratio, 3.5);
  EXPECT_LE(ratio, 4.5);
}

TEST(Evolve, ConservesL2AndSymmetry) {
  const Grid g = make_grid(0.0, 20.0, 128, true);
  const auto q0 = sample_potential({RandomBandlimitedShape{3, 20.0, 12}}, g, 2);
  const auto r = evolve(q0, 1e-3, 500, Reduction::focusing, 100);
  ASSERT_EQ(r.trajectory.size(), 6u);
  const double l0 = conserved_l2(q0);
  for (const auto& s : r.trajectory) {
    EXPECT_LE(std::abs(s.l2_norm - l0) / l0, 1e-12);
    EXPECT_LE(s.symmetry_defect, 1e-12);
    EXPECT_TRUE(s.q.symmetric());
  }
}

TEST(Evolve, RecordsFinalStateOffTheStride) {
  const Grid g = make_grid(0.0, kTwoPi, 32, true);
  const auto r = evolve(plane_wave(g, 0.5, 1.0, 0.0), 1e-2, 7, Reduction::focusing, 3);
  ASSERT_EQ(r.trajectory.size(), 4u);
  EXPECT_EQ(r.trajectory[2].step_count, 6);
  EXPECT_EQ(r.trajectory[3].step_count, 7);
}

TEST(Isospectrality, ZeroPotentialHasEmptySpectrumAboveTheAxis) {
  IsospectralityOptions options;
  options.steps = 20;
  options.snapshot_every = 10;
  const auto r = isospectrality_experiment(MatrixPotential::zero(make_grid(0.0, 10.0, 64, true), 1),
                                           options);
  EXPECT_TRUE(r.empty);
  EXPECT_EQ(r.max_drift, 0.0);
  EXPECT_EQ(r.snapshots.size(), 3u);
}

TEST(Isospectrality, SolitonSpectrumIsPreserved) {
  const Grid g = make_grid(-20.0, 20.0, 256, true);
  IsospectralityOptions options;
  options.steps = 200;
  options.snapshot_every = 100;
  const auto r = isospectrality_experiment(soliton(g, 1.0, 0.0), options);
  ASSERT_FALSE(r.halted);
  EXPECT_FALSE(r.empty);
  EXPECT_LE(r.max_drift, 1e-3);
  // The bound state i/2 of the unit soliton persists.
  bool found = false;
  for (const auto& z : r.snapshots.back().spectrum.eigenvalues) found |= std::abs(z - 0.5 * oracle::I) < 1e-3;
  EXPECT_TRUE(found);
}

TEST(Isospectrality, DefocusingFlowBreaksIsospectrality) {
  const Grid g = make_grid(-20.0, 20.0, 256, true);
  IsospectralityOptions options;
  options.steps = 200;
  options.snapshot_every = 100;
  options.flow = Reduction::defocusing;
  EXPECT_GT(isospectrality_experiment(soliton(g, 1.0, 0.0), options).max_drift, 1e-2);
}
