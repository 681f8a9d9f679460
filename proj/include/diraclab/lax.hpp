#pragma once

#include <array>
#include <functional>
#include <vector>

#include <json.hpp>

#include "diraclab/derivative.hpp"
#include "diraclab/fields.hpp"
#include "diraclab/types.hpp"

namespace diraclab {

/// m x m matrix field sampled on Grid x {t0 + j dt}. slices[j][k] is the
/// value at (x_k, t_j).
struct SpaceTimeField {
  Grid grid;
  int m = 0;
  double t0 = 0.0;
  double dt = 0.0;
  std::vector<std::vector<CMatrix>> slices;

  int time_count() const { return static_cast<int>(slices.size()); }
  double time(int j) const { return t0 + j * dt; }
};

SpaceTimeField sample_space_time(const Grid& grid, int m, double t0, double dt, int count,
                                 const std::function<CMatrix(double x, double t)>& field);

/// Stacks per-slice potentials (all on one grid, uniformly spaced in time).
SpaceTimeField space_time_from_slices(const std::vector<MatrixPotential>& slices, double t0,
                                      double dt);

enum class Reduction { focusing, defocusing };

/// The pair (P, Q) of the AKNS system. Q and P share grid, m and time
/// lattice.
struct AKNSPair {
  SpaceTimeField q;
  SpaceTimeField p;
};

AKNSPair make_akns_pair(SpaceTimeField q, SpaceTimeField p);

/// P = -Q^* (focusing) or P = Q^* (defocusing), pointwise.
AKNSPair reduce(Reduction kind, const SpaceTimeField& q);

/// max ||P - s Q^*||_inf with s = -1 (focusing) or +1 (defocusing).
double reduction_defect(const AKNSPair& pair, Reduction kind);

struct AknsResidual {
  double q = 0.0;  // max ||Q_t - (i/2)Q_xx + iQPQ||_inf
  double p = 0.0;  // max ||P_t + (i/2)P_xx - iPQP||_inf
};

/// Residuals over interior space-time points (interior time slices; all
/// samples of periodic grids, endpoints excluded otherwise). Needs at least
/// three time slices.
AknsResidual akns_residual(const AKNSPair& pair, DerivativeBackend backend = {});

/// The Lax operator L(P, Q) at time slice t_index:
///   G1 = i(F1'' - (1/2)QP F1 - Q F2' - (1/2)Q_x F2)
///   G2 = i(P F1' + (1/2)P_x F1 - F2'' + (1/2)PQ F2)
SpinorField apply_lax_L(const AKNSPair& pair, int t_index, const SpinorField& f,
                        DerivativeBackend backend = {});

/// The general expression M(P, Q) = i(d/dx, -Q; P, -d/dx) at slice t_index.
SpinorField apply_lax_M(const AKNSPair& pair, int t_index, const SpinorField& f,
                        DerivativeBackend backend = {});

/// ||M_t F - (L(MF) - M(LF))|| / ||F|| at the middle time slice.
double lax_equation_residual(const AKNSPair& pair, const SpinorField& f,
                             DerivativeBackend backend = {});

/// U(z, P, Q) = (-izI, Q; P, izI)
CMatrix zero_curvature_U(Complex z, const CMatrix& p, const CMatrix& q);
/// V(z, P, Q) = (-iz^2 I - (i/2)QP, zQ + (i/2)Q_x; zP - (i/2)P_x, iz^2 I + (i/2)PQ)
CMatrix zero_curvature_V(Complex z, const CMatrix& p, const CMatrix& q, const CMatrix& px,
                         const CMatrix& qx);

/// max ||U_t - V_x + [U, V]||_inf over interior space-time points.
double zero_curvature_residual(const AKNSPair& pair, Complex z, DerivativeBackend backend = {});

/// Fixed probe set {0, 1, -1, i, -i}. The zero-curvature equation must hold
/// for every z, so a finite probe is a necessary condition only.
inline const std::array<Complex, 5> kZeroCurvatureProbes = {
    Complex(0.0, 0.0), Complex(1.0, 0.0), Complex(-1.0, 0.0), Complex(0.0, 1.0),
    Complex(0.0, -1.0)};

nlohmann::json to_json(const SpaceTimeField& field);
SpaceTimeField space_time_from_json(const nlohmann::json& doc);

}  // namespace diraclab
