#include <algorithm>
#include <cmath>
#include <string>

#include "diraclab/errors.hpp"
#include "diraclab/linalg.hpp"
#include "diraclab/spectral.hpp"

namespace diraclab {

namespace {

using Matrix2 = Eigen::Matrix2cd;
using Vector2 = Eigen::Vector2cd;

constexpr double kDecayBound = 1e-6;

Complex scalar_at(const MatrixPotential& q, int k) { return q.data()[k]; }

// a(z) from a fixed stride; `last` is the final sample reached.
Complex integrate(const MatrixPotential& q, Complex z, int stride, int last) {
  const Grid& grid = q.grid();
  const double h = grid.spacing() * stride;
  const double x0 = grid.point(0);
  Vector2 f(std::exp(-kI * z * x0), 0.0);
  Matrix2 b;
  for (int k = 0; k + stride <= last; k += stride) {
    const Complex mid = 0.5 * (scalar_at(q, k) + scalar_at(q, k + stride));
    b << -kI * z, mid, -std::conj(mid), kI * z;
    f = expm_pade<Matrix2>(h * b) * f;
  }
  return f[0] * std::exp(kI * z * grid.point(last));
}

int last_reached(int n, int stride) { return ((n - 1) / stride) * stride; }

void require_scalar_decaying(const MatrixPotential& q) {
  if (q.m() != 1) throw DomainError("shooting: only scalar (m = 1) potentials are supported");
  const int n = q.size();
  if (std::abs(scalar_at(q, 0)) > kDecayBound || std::abs(scalar_at(q, n - 1)) > kDecayBound) {
    throw DomainError("shooting: potential does not decay at the grid ends");
  }
}

bool inside(const SearchBox& box, Complex z) {
  constexpr double margin = 1e-9;
  return z.real() >= box.re_min - margin && z.real() <= box.re_max + margin &&
         z.imag() >= box.im_min - margin && z.imag() <= box.im_max + margin;
}

}  // namespace

Complex transmission_coefficient(const MatrixPotential& q, Complex z, int stride) {
  if (q.m() != 1) throw DomainError("shooting: only scalar (m = 1) potentials are supported");
  if (stride < 1) throw DomainError("shooting: stride must be positive");
  return integrate(q, z, stride, last_reached(q.size(), stride));
}

SpectrumSample shooting_discrete_eigenvalues(const MatrixPotential& q, const SearchBox& box,
                                             int grid_density, const ShootingOptions& options) {
  require_scalar_decaying(q);
  if (grid_density < 2) throw DomainError("shooting: lattice needs at least 2 points per side");
  if (!(box.re_min < box.re_max) || !(box.im_min < box.im_max) || box.im_min <= 0.0) {
    throw DomainError("shooting: search box must be a proper rectangle in the upper half plane");
  }
  const int n = q.size();
  const double h = q.grid().spacing();

  const int scan_stride = std::max(1, static_cast<int>(std::floor(options.scan_step / h)));
  const int scan_last = last_reached(n, scan_stride);
  const bool extrapolate = options.extrapolate && (n - 1) % 2 == 0 && n >= 5;

  auto polish_value = [&](Complex z) {
    const Complex fine = integrate(q, z, 1, n - 1);
    if (!extrapolate) return fine;
    return (4.0 * fine - integrate(q, z, 2, n - 1)) / 3.0;
  };

  const int g = grid_density;
  const double dre = (box.re_max - box.re_min) / (g - 1);
  const double dim = (box.im_max - box.im_min) / (g - 1);
  auto lattice = [&](int i, int j) { return Complex(box.re_min + i * dre, box.im_min + j * dim); };

  std::vector<double> modulus(static_cast<std::size_t>(g) * g);
  for (int i = 0; i < g; ++i) {
    for (int j = 0; j < g; ++j) {
      modulus[i * g + j] = std::abs(integrate(q, lattice(i, j), scan_stride, scan_last));
    }
  }

  SpectrumSample result;
  result.provenance = Provenance::shooting;
  result.label = "a(z) = 0";
  result.m = 1;
  result.grid = q.grid();

  const double offset = 0.1 * std::min(dre, dim);
  for (int i = 0; i < g; ++i) {
    for (int j = 0; j < g; ++j) {
      const double here = modulus[i * g + j];
      bool minimum = true;
      for (int di = -1; di <= 1 && minimum; ++di) {
        for (int dj = -1; dj <= 1; ++dj) {
          const int ii = i + di;
          const int jj = j + dj;
          if ((di == 0 && dj == 0) || ii < 0 || jj < 0 || ii >= g || jj >= g) continue;
          if (modulus[ii * g + jj] < here) {
            minimum = false;
            break;
          }
        }
      }
      if (!minimum) continue;

      Complex z0 = lattice(i, j);
      Complex z1 = z0 + Complex(offset, offset);
      Complex f0 = polish_value(z0);
      Complex f1 = polish_value(z1);
      bool converged = false;
      for (int step = 0; step < options.max_secant_steps; ++step) {
        if (std::abs(f1) <= options.tolerance) {
          converged = true;
          break;
        }
        if (f1 == f0) break;
        const Complex z2 = z1 - f1 * (z1 - z0) / (f1 - f0);
        if (!std::isfinite(z2.real()) || !std::isfinite(z2.imag())) break;
        z0 = z1;
        f0 = f1;
        z1 = z2;
        f1 = polish_value(z1);
      }
      if (!converged || !inside(box, z1)) {
        ++result.dropped_candidates;
        continue;
      }
      const bool duplicate = std::any_of(
          result.eigenvalues.begin(), result.eigenvalues.end(),
          [&](Complex r) { return std::abs(r - z1) <= 1e-6 * std::max(1.0, std::abs(r)); });
      if (!duplicate) result.eigenvalues.push_back(z1);
    }
  }
  return result;
}

}  // namespace diraclab
