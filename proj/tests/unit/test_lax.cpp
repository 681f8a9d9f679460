#include <cmath>
#include <numbers>

#include <gtest/gtest.h>

#include "diraclab/errors.hpp"
#include "diraclab/lax.hpp"
#include "diraclab/operators.hpp"
#include "diraclab/potentials.hpp"
#include "oracles.hpp"

using namespace diraclab;

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

SpaceTimeField soliton_field(double amplitude, int n, double speed_error = 0.0) {
  const Grid g = make_grid(-20.0, 20.0, n, true);
  return sample_space_time(g, 1, 0.0, 1e-3, 5, [=](double x, double t) {
    return CMatrix::Constant(
        1, 1, oracle::soliton(amplitude, x, t) * std::exp(oracle::I * (speed_error * t)));
  });
}

SpaceTimeField plane_wave_field(Complex a, double k, double sign, int n) {
  const Grid g = make_grid(0.0, kTwoPi, n, true);
  const double omega = 0.5 * k * k - sign * std::norm(a);
  return sample_space_time(g, 1, 0.0, 1e-3, 5, [=](double x, double t) {
    return CMatrix::Constant(1, 1, a * std::exp(oracle::I * (k * x - omega * t)));
  });
}

double largest_entry(const CMatrix& a) { return a.cwiseAbs().maxCoeff(); }

// L(MF) - M(LF) built from the entrywise L formula with a chosen sign of the
// P_x term; derivatives of the sampled intermediate fields are spectral.
CVector commutator_with_oracle_L(const AKNSPair& pair, int t, const SpinorField& f, double px_sign) {
  const Grid& g = pair.q.grid;
  const Differentiator d({}, g);
  const int m = pair.q.m;
  const int w = 2 * m;
  auto px = std::vector<CMatrix>(g.size());
  auto qx = std::vector<CMatrix>(g.size());
  {
    std::vector<Complex> ps(g.size()), qs(g.size());
    for (int k = 0; k < g.size(); ++k) {
      ps[k] = pair.p.slices[t][k](0, 0);
      qs[k] = pair.q.slices[t][k](0, 0);
    }
    const auto dp = d.apply(ps);
    const auto dq = d.apply(qs);
    for (int k = 0; k < g.size(); ++k) {
      px[k] = CMatrix::Constant(1, 1, dp[k]);
      qx[k] = CMatrix::Constant(1, 1, dq[k]);
    }
  }
  const auto apply_l = [&](const SpinorField& u) {
    const SpinorField du = d.apply(u);
    const SpinorField d2u = d.apply(du);
    SpinorField out = SpinorField::zero(g, m);
    for (int k = 0; k < g.size(); ++k) {
      out.stacked().segment(k * w, w) =
          oracle::lax_L(pair.p.slices[t][k], pair.q.slices[t][k], px[k], qx[k], u.sample(k),
                        du.sample(k), d2u.sample(k), px_sign);
    }
    return out;
  };
  const SpinorField mf = apply_lax_M(pair, t, f);
  return apply_l(mf).stacked() - apply_lax_M(pair, t, apply_l(f)).stacked();
}

}  // namespace

TEST(Reduction, FocusingAndDefocusingAdjoints) {
  const Grid g = make_grid(0.0, 1.0, 4, true);
  CMatrix q(2, 2);
  q << Complex(1.0, 2.0), Complex(0.0, -1.0), Complex(3.0, 0.5), Complex(-1.0, 0.0);
  const auto field = sample_space_time(g, 2, 0.0, 0.1, 3, [&](double, double) { return q; });
  const auto focusing = reduce(Reduction::focusing, field);
  const auto defocusing = reduce(Reduction::defocusing, field);
  EXPECT_EQ(focusing.p.slices[1][2], CMatrix(-q.adjoint()));
  EXPECT_EQ(defocusing.p.slices[2][0], CMatrix(q.adjoint()));
  EXPECT_EQ(focusing.p.slices[0][0](0, 1), Complex(-3.0, 0.5));
  EXPECT_EQ(reduction_defect(focusing, Reduction::focusing), 0.0);
  EXPECT_EQ(reduction_defect(defocusing, Reduction::defocusing), 0.0);
  EXPECT_DOUBLE_EQ(reduction_defect(focusing, Reduction::defocusing), 2.0 * largest_entry(q));
}

TEST(Reduction, PairsMustShareTheirLattice) {
  const Grid g = make_grid(0.0, 1.0, 8, true);
  const auto zero = [](double, double) { return CMatrix::Zero(1, 1).eval(); };
  const auto a = sample_space_time(g, 1, 0.0, 0.1, 3, zero);
  EXPECT_THROW(make_akns_pair(a, sample_space_time(g, 1, 0.0, 0.2, 3, zero)), DomainError);
  EXPECT_THROW(make_akns_pair(a, sample_space_time(g, 1, 0.0, 0.1, 4, zero)), DomainError);
  EXPECT_THROW(make_akns_pair(a, sample_space_time(make_grid(0.0, 1.0, 16, true), 1, 0.0, 0.1, 3,
                                                   zero)),
               DomainError);
  const auto two = sample_space_time(g, 1, 0.0, 0.1, 2, zero);
  EXPECT_THROW(akns_residual(reduce(Reduction::focusing, two)), DomainError);
}

TEST(Akns, ZeroFieldIsExact) {
  const Grid g = make_grid(0.0, 1.0, 16, true);
  const auto pair = reduce(Reduction::focusing, sample_space_time(g, 2, 0.0, 1e-3, 5, [](double, double) {
                              return CMatrix::Zero(2, 2).eval();
                            }));
  const auto r = akns_residual(pair);
  EXPECT_EQ(r.q, 0.0);
  EXPECT_EQ(r.p, 0.0);
  for (Complex z : kZeroCurvatureProbes) EXPECT_EQ(zero_curvature_residual(pair, z), 0.0);
}

TEST(Akns, FocusingPlaneWave) {
  const auto pair = reduce(Reduction::focusing, plane_wave_field({0.8, 0.3}, 2.0, 1.0, 64));
  const auto r = akns_residual(pair);
  EXPECT_LE(r.q, 1e-6);
  EXPECT_LE(r.p, 1e-6);
  for (Complex z : kZeroCurvatureProbes) EXPECT_LE(zero_curvature_residual(pair, z), 1e-5) << z;
}

TEST(Akns, DefocusingPlaneWaveNeedsDefocusingReduction) {
  const auto field = plane_wave_field({0.8, 0.0}, 1.0, -1.0, 64);
  EXPECT_LE(akns_residual(reduce(Reduction::defocusing, field)).q, 1e-6);
  EXPECT_GT(akns_residual(reduce(Reduction::focusing, field)).q, 1e-1);
}

TEST(Akns, FocusingSoliton) {
  const auto pair = reduce(Reduction::focusing, soliton_field(1.0, 1024));
  const auto r = akns_residual(pair);
  EXPECT_LE(r.q, 1e-6);
  EXPECT_LE(r.p, 1e-6);
  for (Complex z : kZeroCurvatureProbes) EXPECT_LE(zero_curvature_residual(pair, z), 1e-5) << z;
}

TEST(Akns, WrongPhaseSpeedIsDetected) {
  const auto pair = reduce(Reduction::focusing, soliton_field(1.0, 1024, 1.0));
  EXPECT_GE(akns_residual(pair).q, 1e-2);
  for (Complex z : kZeroCurvatureProbes) EXPECT_GE(zero_curvature_residual(pair, z), 1e-3) << z;
  EXPECT_GE(lax_equation_residual(pair, oracle::ModeField(pair.q.grid, 1, 4, 3).sample(pair.q.grid)),
            1e-3);
}

TEST(ZeroCurvature, MatrixEntries) {
  const Complex z(0.5, -1.0);
  const CMatrix p = CMatrix::Constant(1, 1, Complex(2.0, 1.0));
  const CMatrix q = CMatrix::Constant(1, 1, Complex(-1.0, 3.0));
  const CMatrix px = CMatrix::Constant(1, 1, Complex(0.0, 4.0));
  const CMatrix qx = CMatrix::Constant(1, 1, Complex(5.0, 0.0));
  const CMatrix u = zero_curvature_U(z, p, q);
  EXPECT_EQ(u(0, 0), -oracle::I * z);
  EXPECT_EQ(u(0, 1), q(0, 0));
  EXPECT_EQ(u(1, 0), p(0, 0));
  EXPECT_EQ(u(1, 1), oracle::I * z);
  const CMatrix v = zero_curvature_V(z, p, q, px, qx);
  const Complex qp = q(0, 0) * p(0, 0);
  EXPECT_NEAR(std::abs(v(0, 0) - (-oracle::I * z * z - 0.5 * oracle::I * qp)), 0.0, 1e-14);
  EXPECT_NEAR(std::abs(v(0, 1) - (z * q(0, 0) + 0.5 * oracle::I * qx(0, 0))), 0.0, 1e-14);
  EXPECT_NEAR(std::abs(v(1, 0) - (z * p(0, 0) - 0.5 * oracle::I * px(0, 0))), 0.0, 1e-14);
  EXPECT_NEAR(std::abs(v(1, 1) - (oracle::I * z * z + 0.5 * oracle::I * qp)), 0.0, 1e-14);
}

TEST(ZeroCurvature, ProbeSet) {
  ASSERT_EQ(kZeroCurvatureProbes.size(), 5u);
  EXPECT_EQ(kZeroCurvatureProbes[0], Complex(0.0, 0.0));
  EXPECT_EQ(kZeroCurvatureProbes[3], Complex(0.0, 1.0));
}

TEST(LaxOperator, FreeCase) {
  const Grid g = make_grid(0.0, kTwoPi, 32, true);
  const auto pair = reduce(Reduction::focusing, sample_space_time(g, 1, 0.0, 0.1, 3, [](double, double) {
                              return CMatrix::Zero(1, 1).eval();
                            }));
  const int k = 3;
  CVector v = CVector::Zero(64);
  for (int j = 0; j < 32; ++j) v[2 * j] = std::exp(oracle::I * (k * g.point(j)));
  const auto out = apply_lax_L(pair, 1, SpinorField(g, 1, v));
  for (int j = 0; j < 32; ++j) {
    EXPECT_NEAR(std::abs(out.stacked()[2 * j] + oracle::I * double(k * k) * v[2 * j]), 0.0, 1e-11);
    EXPECT_NEAR(std::abs(out.stacked()[2 * j + 1]), 0.0, 1e-12);
  }
}

TEST(LaxOperator, ConstantPair) {
  const Grid g = make_grid(0.0, 1.0, 16, true);
  const Complex c(0.6, -0.2);
  const auto constant = sample_space_time(g, 1, 0.0, 0.1, 3, [&](double, double) {
    return CMatrix::Constant(1, 1, c);
  });
  const auto pair = make_akns_pair(constant, constant);
  CVector v = CVector::Zero(32);
  for (int j = 0; j < 16; ++j) v[2 * j] = 1.0;
  const auto out = apply_lax_L(pair, 0, SpinorField(g, 1, v));
  for (int j = 0; j < 16; ++j) {
    EXPECT_NEAR(std::abs(out.stacked()[2 * j] + 0.5 * oracle::I * c * c), 0.0, 1e-14);
    EXPECT_NEAR(std::abs(out.stacked()[2 * j + 1]), 0.0, 1e-14);
  }
}

TEST(LaxOperator, MatchesEntrywiseFormula) {
  const Grid g = make_grid(0.0, 12.0, 64, true);
  const oracle::MatrixMode qm(g, 2, 31, 2, 1.0, false);
  const oracle::MatrixMode pm(g, 2, 32, 2, 1.0, false);
  const auto q = sample_space_time(g, 2, 0.0, 0.1, 3, [&](double x, double) { return qm.at(x); });
  const auto p = sample_space_time(g, 2, 0.0, 0.1, 3, [&](double x, double) { return pm.at(x); });
  const auto pair = make_akns_pair(q, p);
  const oracle::ModeField f(g, 2, 33, 3);
  CVector ref(g.size() * 4);
  for (int k = 0; k < g.size(); ++k) {
    const double x = g.point(k);
    ref.segment(k * 4, 4) =
        oracle::lax_L(pm.at(x), qm.at(x), pm.at(x, 1), qm.at(x, 1), f.at(x), f.at(x, 1), f.at(x, 2));
  }
  const auto out = apply_lax_L(pair, 1, f.sample(g));
  EXPECT_LE(oracle::relative_l2(out.stacked() - ref, ref), 1e-13);
}

TEST(LaxOperator, GeneralExpressionReducesToM) {
  const Grid g = make_grid(0.0, 20.0, 64, true);
  const auto q0 = sample_potential({RandomBandlimitedShape{3, 20.0, 2}}, g, 2);
  const auto field = space_time_from_slices({q0, q0, q0}, 0.0, 0.1);
  const auto f = oracle::ModeField(g, 2, 8).sample(g);
  const auto lhs = apply_lax_M(reduce(Reduction::focusing, field), 1, f).stacked();
  const auto rhs = apply_M(q0, f, false, {}).stacked();
  EXPECT_LE((lhs - rhs).norm(), 1e-14 * rhs.norm());
}

TEST(LaxEquation, ZeroField) {
  const Grid g = make_grid(0.0, 1.0, 16, true);
  const auto pair = reduce(Reduction::focusing, sample_space_time(g, 1, 0.0, 0.1, 3, [](double, double) {
                              return CMatrix::Zero(1, 1).eval();
                            }));
  EXPECT_LE(lax_equation_residual(pair, oracle::ModeField(g, 1, 1).sample(g)), 1e-12);
}

TEST(LaxEquation, FocusingSoliton) {
  for (double amplitude : {1.0, 2.0}) {
    const auto pair = reduce(Reduction::focusing, soliton_field(amplitude, 1024));
    const auto f = oracle::ModeField(pair.q.grid, 1, 4, 3).sample(pair.q.grid);
    EXPECT_LE(lax_equation_residual(pair, f), 1e-5) << "A=" << amplitude;
  }
}

TEST(LaxEquation, FocusingPlaneWave) {
  const auto pair = reduce(Reduction::focusing, plane_wave_field({0.8, 0.3}, 2.0, 1.0, 64));
  const auto f = oracle::ModeField(pair.q.grid, 1, 5, 3).sample(pair.q.grid);
  EXPECT_LE(lax_equation_residual(pair, f), 1e-5);
}

TEST(LaxEquation, SignOfTheDerivativeTermMatters) {
  // The commutator built with +(1/2)P_x reproduces the library's residual;
  // with -(1/2)P_x the Lax equation fails by O(1).
  const auto pair = reduce(Reduction::focusing, soliton_field(1.0, 1024));
  const Grid& g = pair.q.grid;
  const auto f = oracle::ModeField(g, 1, 4, 3).sample(g);
  const int mid = pair.q.time_count() / 2;
  CVector mt(f.stacked().size());
  {
    const auto ahead = apply_lax_M(pair, mid + 1, f).stacked();
    const auto behind = apply_lax_M(pair, mid - 1, f).stacked();
    mt = (ahead - behind) / (2.0 * pair.q.dt);
  }
  const double norm = std::sqrt(g.spacing()) * f.stacked().norm();
  const double plus = std::sqrt(g.spacing()) * (mt - commutator_with_oracle_L(pair, mid, f, 1.0)).norm() / norm;
  const double minus = std::sqrt(g.spacing()) * (mt - commutator_with_oracle_L(pair, mid, f, -1.0)).norm() / norm;
  EXPECT_LE(plus, 1e-5);
  EXPECT_NEAR(plus, lax_equation_residual(pair, f), 1e-9);
  EXPECT_GT(minus, 1e-1);
}

TEST(SpaceTimeField, JsonRoundTrip) {
  const auto field = soliton_field(1.0, 64);
  const auto back = space_time_from_json(nlohmann::json::parse(to_json(field).dump()));
  EXPECT_EQ(back.grid, field.grid);
  EXPECT_EQ(back.time_count(), field.time_count());
  EXPECT_EQ(back.dt, field.dt);
  EXPECT_EQ(back.slices[3][17], field.slices[3][17]);
}
