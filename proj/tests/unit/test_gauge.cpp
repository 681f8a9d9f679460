#include <cmath>
#include <functional>

#include <gtest/gtest.h>

#include "diraclab/errors.hpp"
#include "diraclab/gauge.hpp"
#include "diraclab/involutions.hpp"
#include "diraclab/potentials.hpp"
#include "oracles.hpp"

using namespace diraclab;

namespace {

CMatrix generator(const CMatrix& q) {
  const auto m = q.rows();
  CMatrix g = CMatrix::Zero(2 * m, 2 * m);
  g.topRightCorner(m, m) = q;
  g.bottomLeftCorner(m, m) = -q.adjoint();
  return g;
}

// Non-autonomous RK4 for U' = A(x)U with the analytic potential, used as a
// reference for the sampled midpoint integrator.
CMatrix rk4_family(const std::function<CMatrix(double)>& q, double x0, double x1, int steps) {
  const auto m = q(x0).rows();
  CMatrix u = CMatrix::Identity(2 * m, 2 * m);
  const double h = (x1 - x0) / steps;
  for (int s = 0; s < steps; ++s) {
    const double x = x0 + s * h;
    const CMatrix k1 = generator(q(x)) * u;
    const CMatrix k2 = generator(q(x + 0.5 * h)) * (u + 0.5 * h * k1);
    const CMatrix k3 = generator(q(x + 0.5 * h)) * (u + 0.5 * h * k2);
    const CMatrix k4 = generator(q(x + h)) * (u + h * k3);
    u += h / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
  }
  return u;
}

double largest_entry(const CMatrix& a) { return a.cwiseAbs().maxCoeff(); }

UnitaryFamily single_sample(const CMatrix& s) {
  const Grid g = make_grid(0.0, 1.0, 4, true);
  return UnitaryFamily{static_cast<int>(s.rows() / 2), g, std::vector<CMatrix>(4, s), 0};
}

}  // namespace

TEST(GaugeFamily, ZeroPotentialGivesIdentity) {
  const Grid g = make_grid(-3.0, 3.0, 50, false);
  const auto u = compute_gauge_family(MatrixPotential::zero(g, 2));
  for (const auto& s : u.samples) EXPECT_EQ(s, CMatrix::Identity(4, 4));
}

TEST(GaugeFamily, ConstantScalarPotentialMatchesClosedForm) {
  const Grid g = make_grid(-2.0, 3.0, 101, false);
  const Complex c(0.6, 0.8);
  const auto u = compute_gauge_family(
      sample_potential({ConstantShape{CMatrix::Constant(1, 1, c)}}, g, 1));
  ASSERT_EQ(u.anchor_index, 40);
  const CMatrix a = generator(CMatrix::Constant(1, 1, c));
  for (int k = 0; k < g.size(); ++k) {
    const double x = g.point(k) - g.point(u.anchor_index);
    // A^2 = -|c|^2 I, so exp(xA) = cos(|c|x) I + sin(|c|x)/|c| A.
    const CMatrix closed = std::cos(std::abs(c) * x) * CMatrix::Identity(2, 2) +
                           std::sin(std::abs(c) * x) / std::abs(c) * a;
    EXPECT_LE(largest_entry(u.samples[k] - closed), 1e-12) << "k=" << k;
  }
}

TEST(GaugeFamily, ConstantMatrixPotentialMatchesExponential) {
  const Grid g = make_grid(-1.0, 2.0, 61, false);
  CMatrix c(2, 2);
  c << Complex(0.3, 0.1), Complex(-0.5, 0.2), Complex(-0.5, 0.2), Complex(0.0, 0.7);
  const auto u = compute_gauge_family(sample_potential({ConstantShape{c}}, g, 2));
  for (int k = 0; k < g.size(); ++k) {
    const double x = g.point(k) - g.point(u.anchor_index);
    EXPECT_LE(largest_entry(u.samples[k] - oracle::expm(x * generator(c))), 1e-12);
  }
}

TEST(GaugeFamily, SechFamilyStaysUnitary) {
  const Grid g = make_grid(-10.0, 10.0, 2000, false);
  const auto u = compute_gauge_family(sample_potential({SechShape{{1.5}, {1.0}, 0.0}}, g, 1));
  EXPECT_LE(unitarity_deviation(u), 1e-12);
  EXPECT_LE(determinant_deviation(u), 1e-12);
}

TEST(GaugeFamily, SecondOrderAgainstReference) {
  const auto q = [](double x) {
    CMatrix s(2, 2);
    s << oracle::sech(x), Complex(0.0, 0.5) * oracle::sech(2.0 * x),
        Complex(0.0, 0.5) * oracle::sech(2.0 * x), 0.3 * std::exp(-x * x);
    return s;
  };
  const CMatrix reference = rk4_family(q, 0.0, 4.0, 4000);
  std::vector<double> errors;
  for (int n : {101, 201, 401}) {
    const Grid g = make_grid(0.0, 4.0, n, false);
    std::vector<CMatrix> samples;
    for (int k = 0; k < n; ++k) samples.push_back(q(g.point(k)));
    const auto u = compute_gauge_family(MatrixPotential(g, samples));
    ASSERT_EQ(u.anchor_index, 0);
    errors.push_back(largest_entry(u.samples.back() - reference));
  }
  for (std::size_t i = 0; i + 1 < errors.size(); ++i) {
    const double ratio = errors[i] / errors[i + 1];
    EXPECT_GT(ratio, 3.5);
    EXPECT_LT(ratio, 4.5);
  }
}

TEST(GaugeFamily, DeviationMeasures) {
  EXPECT_EQ(unitarity_deviation(single_sample(CMatrix::Identity(2, 2))), 0.0);
  EXPECT_EQ(determinant_deviation(single_sample(CMatrix::Identity(2, 2))), 0.0);
  const auto scaled = single_sample(3.0 * CMatrix::Identity(2, 2));
  EXPECT_DOUBLE_EQ(unitarity_deviation(scaled), 8.0);
  EXPECT_DOUBLE_EQ(determinant_deviation(scaled), 8.0);
}

TEST(BlockFlip, ConjugatesBySigma3) {
  CMatrix s(4, 4);
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 4; ++j) s(i, j) = Complex(i + 1.0, j - 2.0);
  const auto v = build_block_flip(single_sample(s));
  const BlockInvolutions b(2);
  EXPECT_EQ(v.samples[0], b.sigma3 * s * b.sigma3);
  EXPECT_EQ(v.samples[0](0, 2), -s(0, 2));
  EXPECT_EQ(v.samples[0](3, 1), -s(3, 1));
  EXPECT_EQ(v.samples[0](1, 1), s(1, 1));
  EXPECT_EQ(build_block_flip(v).samples[0], s);
}

TEST(BlockFlip, PreservesUnitarity) {
  const Grid g = make_grid(0.0, 20.0, 256, true);
  const auto u = compute_gauge_family(
      sample_potential({RandomBandlimitedShape{3, 20.0, 4}}, g, 2));
  EXPECT_LE(unitarity_deviation(build_block_flip(u)), 1e-12);
}

TEST(ApplyFamily, InverseUndoesTheFamily) {
  const Grid g = make_grid(0.0, 20.0, 128, true);
  const auto u = compute_gauge_family(
      sample_potential({RandomBandlimitedShape{2, 20.0, 6}}, g, 2));
  const auto f = oracle::ModeField(g, 2, 9).sample(g);
  const auto back = apply_family(u, apply_family(u, f), true);
  EXPECT_LE(oracle::relative_l2(back.stacked() - f.stacked(), f.stacked()), 1e-14);
  EXPECT_THROW(apply_family(u, oracle::ModeField(g, 1, 9).sample(g)), DomainError);
}

TEST(Diagonalization, ZeroPotentialIsExact) {
  const Grid g = make_grid(0.0, 20.0, 128, true);
  const auto q = MatrixPotential::zero(g, 2);
  const auto f = oracle::ModeField(g, 2, 3).sample(g);
  EXPECT_LE(diagonalization_residual(q, f), 1e-13);
  EXPECT_LE(first_order_reduction_residual(q, f), 1e-13);
  EXPECT_EQ(diagonalization_residual(q, SpinorField::zero(g, 2)), 0.0);
}

TEST(Diagonalization, ConvergesForRandomPotential) {
  for (int m : {1, 2}) {
    std::vector<double> diag, reduction;
    for (int n : {256, 512, 1024}) {
      const Grid g = make_grid(0.0, 20.0, n, true);
      const auto q = sample_potential({RandomBandlimitedShape{3, 20.0, 3}}, g, m);
      // The gauge family is not periodic, so the test field must vanish to
      // high order at the ends for U G to be differentiated accurately.
      const auto f = oracle::WindowedField(g, m, 17).sample(g);
      diag.push_back(diagonalization_residual(q, f));
      reduction.push_back(first_order_reduction_residual(q, f));
    }
    for (std::size_t i = 0; i + 1 < diag.size(); ++i) {
      EXPECT_GT(diag[i] / diag[i + 1], 3.0) << "m=" << m;
      EXPECT_GT(reduction[i] / reduction[i + 1], 3.0) << "m=" << m;
    }
  }
}

TEST(Diagonalization, ExactForConstantPotential) {
  // The midpoint exponential is exact for constant Q, leaving only the
  // derivative error, which vanishes for spectral differentiation of
  // windowed band-limited data.
  const Grid g = make_grid(-10.0, 10.0, 512, true);
  CMatrix c(1, 1);
  c << Complex(0.4, -0.3);
  const auto q = sample_potential({ConstantShape{c}}, g, 1);
  const auto f = oracle::WindowedField(g, 1, 5).sample(g);
  EXPECT_LE(diagonalization_residual(q, f), 1e-10);
  EXPECT_LE(first_order_reduction_residual(q, f), 1e-10);
}
