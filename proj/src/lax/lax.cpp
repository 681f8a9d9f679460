#include "diraclab/lax.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "diraclab/errors.hpp"
#include "diraclab/operators.hpp"
#include "diraclab/serialization.hpp"

namespace diraclab {

namespace {

using Blocks = std::vector<CMatrix>;

constexpr double kGuard = 1e-300;

void require_slices(const AKNSPair& pair, int needed, const char* where) {
  if (pair.q.time_count() < needed) {
    throw DomainError(std::string(where) + ": need at least " + std::to_string(needed) +
                      " time slices");
  }
}

// Spatial derivative of a sampled field of square blocks.
Blocks differentiate(const Blocks& blocks, const Differentiator& d) {
  const auto rows = blocks.front().rows();
  const int width = static_cast<int>(rows * rows);
  std::vector<Complex> flat;
  flat.reserve(blocks.size() * width);
  for (const auto& b : blocks) flat.insert(flat.end(), b.data(), b.data() + width);
  const auto out = d.apply_interleaved(flat, width);
  Blocks result;
  result.reserve(blocks.size());
  for (std::size_t k = 0; k < blocks.size(); ++k) {
    result.emplace_back(Eigen::Map<const CMatrix>(out.data() + k * width, rows, rows));
  }
  return result;
}

// Second-order time derivative at slice j: centered in the interior,
// one-sided at the ends.
CMatrix time_derivative(const SpaceTimeField& f, int j, int k) {
  const int last = f.time_count() - 1;
  const double c = 0.5 / f.dt;
  if (j == 0) return c * (-3.0 * f.slices[0][k] + 4.0 * f.slices[1][k] - f.slices[2][k]);
  if (j == last) {
    return c * (3.0 * f.slices[last][k] - 4.0 * f.slices[last - 1][k] + f.slices[last - 2][k]);
  }
  return c * (f.slices[j + 1][k] - f.slices[j - 1][k]);
}

std::pair<int, int> interior_points(const Grid& grid) {
  return grid.periodic() ? std::pair{0, grid.size()} : std::pair{1, grid.size() - 1};
}

void check_field(const SpaceTimeField& f, const char* what) {
  if (f.m < 1) throw DomainError(std::string(what) + ": block dimension must be positive");
  for (const auto& slice : f.slices) {
    if (slice.size() != static_cast<std::size_t>(f.grid.size())) {
      throw DomainError(std::string(what) + ": slice does not match grid");
    }
    for (const auto& b : slice) {
      if (b.rows() != f.m || b.cols() != f.m) {
        throw DomainError(std::string(what) + ": sample is not m x m");
      }
    }
  }
}

}  // namespace

SpaceTimeField sample_space_time(const Grid& grid, int m, double t0, double dt, int count,
                                 const std::function<CMatrix(double x, double t)>& field) {
  if (count < 1) throw DomainError("space-time: need at least one slice");
  if (!(dt > 0.0)) throw DomainError("space-time: dt must be positive");
  SpaceTimeField f{grid, m, t0, dt, {}};
  for (int j = 0; j < count; ++j) {
    std::vector<CMatrix> slice;
    slice.reserve(grid.size());
    for (int k = 0; k < grid.size(); ++k) slice.push_back(field(grid.point(k), f.time(j)));
    f.slices.push_back(std::move(slice));
  }
  check_field(f, "space-time");
  return f;
}

SpaceTimeField space_time_from_slices(const std::vector<MatrixPotential>& slices, double t0,
                                      double dt) {
  if (slices.empty()) throw DomainError("space-time: need at least one slice");
  SpaceTimeField f{slices.front().grid(), slices.front().m(), t0, dt, {}};
  for (const auto& q : slices) {
    if (!(q.grid() == f.grid) || q.m() != f.m) {
      throw DomainError("space-time: slices live on different grids");
    }
    std::vector<CMatrix> slice;
    for (int k = 0; k < q.size(); ++k) slice.emplace_back(q.sample(k));
    f.slices.push_back(std::move(slice));
  }
  return f;
}

AKNSPair make_akns_pair(SpaceTimeField q, SpaceTimeField p) {
  check_field(q, "akns pair (Q)");
  check_field(p, "akns pair (P)");
  if (!(q.grid == p.grid) || q.m != p.m || q.time_count() != p.time_count() || q.dt != p.dt ||
      q.t0 != p.t0) {
    throw DomainError("akns pair: Q and P must share grid, m and time lattice");
  }
  return {std::move(q), std::move(p)};
}

AKNSPair reduce(Reduction kind, const SpaceTimeField& q) {
  SpaceTimeField p = q;
  const double sign = kind == Reduction::focusing ? -1.0 : 1.0;
  for (auto& slice : p.slices) {
    for (auto& b : slice) b = sign * b.adjoint().eval();
  }
  return make_akns_pair(q, std::move(p));
}

double reduction_defect(const AKNSPair& pair, Reduction kind) {
  const double sign = kind == Reduction::focusing ? -1.0 : 1.0;
  double worst = 0.0;
  for (int j = 0; j < pair.q.time_count(); ++j) {
    for (int k = 0; k < pair.q.grid.size(); ++k) {
      worst = std::max(worst,
                       max_abs(pair.p.slices[j][k] - sign * pair.q.slices[j][k].adjoint()));
    }
  }
  return worst;
}

AknsResidual akns_residual(const AKNSPair& pair, DerivativeBackend backend) {
  require_slices(pair, 3, "akns_residual");
  const Differentiator d(backend, pair.q.grid);
  const auto [first, last] = interior_points(pair.q.grid);
  AknsResidual r;
  for (int j = 1; j + 1 < pair.q.time_count(); ++j) {
    const Blocks& q = pair.q.slices[j];
    const Blocks& p = pair.p.slices[j];
    const Blocks qxx = differentiate(differentiate(q, d), d);
    const Blocks pxx = differentiate(differentiate(p, d), d);
    for (int k = first; k < last; ++k) {
      const CMatrix rq =
          time_derivative(pair.q, j, k) - 0.5 * kI * qxx[k] + kI * (q[k] * p[k] * q[k]);
      const CMatrix rp =
          time_derivative(pair.p, j, k) + 0.5 * kI * pxx[k] - kI * (p[k] * q[k] * p[k]);
      r.q = std::max(r.q, max_abs(rq));
      r.p = std::max(r.p, max_abs(rp));
    }
  }
  return r;
}

SpinorField apply_lax_M(const AKNSPair& pair, int t_index, const SpinorField& f,
                        DerivativeBackend backend) {
  if (t_index < 0 || t_index >= pair.q.time_count()) throw DomainError("lax: bad time index");
  const Differentiator d(backend, pair.q.grid);
  return DiracForm::general(pair.q.grid, pair.q.m, pair.p.slices[t_index],
                            pair.q.slices[t_index])
      .apply(f, d);
}

SpinorField apply_lax_L(const AKNSPair& pair, int t_index, const SpinorField& f,
                        DerivativeBackend backend) {
  if (t_index < 0 || t_index >= pair.q.time_count()) throw DomainError("lax: bad time index");
  if (!(f.grid() == pair.q.grid) || f.m() != pair.q.m) {
    throw DomainError("lax: field lives on another grid");
  }
  const Differentiator d(backend, pair.q.grid);
  const Blocks& q = pair.q.slices[t_index];
  const Blocks& p = pair.p.slices[t_index];
  const Blocks qx = differentiate(q, d);
  const Blocks px = differentiate(p, d);
  const SpinorField df = d.apply(f);
  const SpinorField d2f = d.apply(df);
  SpinorField out = SpinorField::zero(f.grid(), f.m());
  for (int k = 0; k < f.size(); ++k) {
    const CVector f1 = f.upper(k);
    const CVector f2 = f.lower(k);
    out.upper(k) =
        kI * (d2f.upper(k) - 0.5 * (q[k] * (p[k] * f1)) - q[k] * df.lower(k) - 0.5 * (qx[k] * f2));
    out.lower(k) =
        kI * (p[k] * df.upper(k) + 0.5 * (px[k] * f1) - d2f.lower(k) + 0.5 * (p[k] * (q[k] * f2)));
  }
  return out;
}

double lax_equation_residual(const AKNSPair& pair, const SpinorField& f,
                             DerivativeBackend backend) {
  require_slices(pair, 3, "lax_equation_residual");
  const int j = pair.q.time_count() / 2;
  SpinorField mt = SpinorField::zero(f.grid(), f.m());
  for (int k = 0; k < f.size(); ++k) {
    mt.upper(k) = -kI * (time_derivative(pair.q, j, k) * f.lower(k));
    mt.lower(k) = kI * (time_derivative(pair.p, j, k) * f.upper(k));
  }
  const SpinorField lm = apply_lax_L(pair, j, apply_lax_M(pair, j, f, backend), backend);
  const SpinorField ml = apply_lax_M(pair, j, apply_lax_L(pair, j, f, backend), backend);
  mt.stacked() -= lm.stacked() - ml.stacked();
  return l2_norm(mt) / std::max(l2_norm(f), kGuard);
}

CMatrix zero_curvature_U(Complex z, const CMatrix& p, const CMatrix& q) {
  const auto m = q.rows();
  CMatrix u(2 * m, 2 * m);
  const CMatrix id = CMatrix::Identity(m, m);
  u << -kI * z * id, q, p, kI * z * id;
  return u;
}

CMatrix zero_curvature_V(Complex z, const CMatrix& p, const CMatrix& q, const CMatrix& px,
                         const CMatrix& qx) {
  const auto m = q.rows();
  CMatrix v(2 * m, 2 * m);
  const CMatrix id = CMatrix::Identity(m, m);
  v << -kI * z * z * id - 0.5 * kI * (q * p), z * q + 0.5 * kI * qx,  //
      z * p - 0.5 * kI * px, kI * z * z * id + 0.5 * kI * (p * q);
  return v;
}

double zero_curvature_residual(const AKNSPair& pair, Complex z, DerivativeBackend backend) {
  require_slices(pair, 3, "zero_curvature_residual");
  const Differentiator d(backend, pair.q.grid);
  const auto [first, last] = interior_points(pair.q.grid);
  const int m = pair.q.m;
  double worst = 0.0;
  for (int j = 1; j + 1 < pair.q.time_count(); ++j) {
    const Blocks& q = pair.q.slices[j];
    const Blocks& p = pair.p.slices[j];
    const Blocks qx = differentiate(q, d);
    const Blocks px = differentiate(p, d);
    Blocks v;
    v.reserve(q.size());
    for (std::size_t k = 0; k < q.size(); ++k) {
      v.push_back(zero_curvature_V(z, p[k], q[k], px[k], qx[k]));
    }
    const Blocks vx = differentiate(v, d);
    for (int k = first; k < last; ++k) {
      CMatrix ut = CMatrix::Zero(2 * m, 2 * m);
      ut.topRightCorner(m, m) = time_derivative(pair.q, j, k);
      ut.bottomLeftCorner(m, m) = time_derivative(pair.p, j, k);
      const CMatrix u = zero_curvature_U(z, p[k], q[k]);
      worst = std::max(worst, max_abs(ut - vx[k] + u * v[k] - v[k] * u));
    }
  }
  return worst;
}

nlohmann::json to_json(const SpaceTimeField& field) {
  nlohmann::json slices = nlohmann::json::array();
  for (const auto& s : field.slices) slices.push_back(blocks_to_json(field.grid, field.m, s));
  return {{"t0", field.t0}, {"dt", field.dt}, {"slices", std::move(slices)}};
}

SpaceTimeField space_time_from_json(const nlohmann::json& doc) {
  try {
    const auto& slices = doc.at("slices");
    if (!slices.is_array() || slices.empty()) throw DomainError("space-time: no slices");
    SpaceTimeField f{grid_from_json(slices.front().at("grid")), slices.front().at("m").get<int>(),
                     doc.at("t0").get<double>(), doc.at("dt").get<double>(), {}};
    for (const auto& s : slices) {
      if (!(grid_from_json(s.at("grid")) == f.grid) || s.at("m").get<int>() != f.m) {
        throw DomainError("space-time: slices live on different grids");
      }
      f.slices.push_back(blocks_from_json(s, f.m));
    }
    check_field(f, "space-time");
    return f;
  } catch (const nlohmann::json::exception& e) {
    throw DomainError(std::string("json: bad space-time document: ") + e.what());
  }
}

}  // namespace diraclab
