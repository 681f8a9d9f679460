#pragma once

#include <cstdint>
#include <variant>
#include <vector>

#include "diraclab/fields.hpp"
#include "diraclab/grid.hpp"
#include "diraclab/types.hpp"

namespace diraclab {

/// Scalar profile used for the entries of a column potential.
struct ScalarProfile {
  enum class Kind { zero, constant, sech, plane_wave };
  Kind kind = Kind::zero;
  Complex amplitude{0.0, 0.0};
  double rate = 1.0;        // sech: a * sech(rate * x)
  double wavenumber = 0.0;  // plane_wave: a * exp(i k x)

  Complex operator()(double x) const;
};

struct ZeroShape {};

struct ConstantShape {
  CMatrix value;
};

/// diag(a_j * sech(b_j * (x - center))); empty `rates` means b_j = a_j.
struct SechShape {
  std::vector<double> amplitudes;
  std::vector<double> rates;
  double center = 0.0;
};

/// diag(a_j) * exp(i k x).
struct PlaneWaveShape {
  std::vector<Complex> amplitudes;
  double wavenumber = 0.0;
};

/// sum_{|k| <= max_mode} C_k exp(2 pi i k x / period) with C_k complex
/// Gaussian (E|entry|^2 = amplitude^2) symmetrized as (C_k + C_k^T) / 2.
struct RandomBandlimitedShape {
  int max_mode = 0;
  double period = 1.0;
  std::uint64_t seed = 0;
  double amplitude = 1.0;
};

/// Q = (q | 0 | ... | 0): the vector-NLS shape. Asymmetric for m >= 2.
struct ColumnShape {
  std::vector<ScalarProfile> entries;
};

using PotentialShape =
    std::variant<ZeroShape, ConstantShape, SechShape, PlaneWaveShape, RandomBandlimitedShape,
                 ColumnShape>;

struct PotentialSpec {
  PotentialShape shape;
  bool allow_asymmetric = false;
};

/// Samples the potential at every grid point. Throws DomainError for
/// asymmetric requests without allow_asymmetric, or for parameter vectors
/// whose length differs from m.
MatrixPotential sample_potential(const PotentialSpec& spec, const Grid& grid, int m);

/// Evaluates the shape at a single point (same conventions as sampling).
CMatrix evaluate_potential(const PotentialSpec& spec, double x, int m);

}  // namespace diraclab
