#pragma once

#include <optional>
#include <span>
#include <vector>

#include "diraclab/fields.hpp"
#include "diraclab/fourier.hpp"
#include "diraclab/grid.hpp"
#include "diraclab/types.hpp"

namespace diraclab {

enum class DerivativeKind {
  /// Fourier differentiation on periodic grids; exact on band-limited data.
  /// The Nyquist mode of even-length grids is differentiated to zero, which
  /// keeps the differentiation matrix real and antisymmetric.
  spectral,
  /// Second-order centered differences; one-sided second-order stencils at
  /// the ends of non-periodic grids.
  central2,
};

struct DerivativeBackend {
  DerivativeKind kind = DerivativeKind::spectral;
};

const char* to_string(DerivativeKind kind);
DerivativeKind derivative_kind_from_string(const std::string& name);

/// d/dx on a fixed grid. Throws DomainError for a spectral backend on a
/// non-periodic grid.
class Differentiator {
 public:
  Differentiator(DerivativeBackend backend, const Grid& grid);

  const Grid& grid() const { return grid_; }
  DerivativeKind kind() const { return backend_.kind; }

  /// Differentiates one series of grid.size() samples.
  std::vector<Complex> apply(std::span<const Complex> values) const;

  /// Differentiates `width` interleaved series stored sample-major
  /// (value of series c at sample k lives at k*width + c).
  std::vector<Complex> apply_interleaved(std::span<const Complex> values, int width) const;

  SpinorField apply(const SpinorField& f) const;

  /// The n x n differentiation matrix, built by direct stencil placement
  /// (closed-form periodic sinc-derivative entries for the spectral kind).
  RMatrix matrix() const;

 private:
  void apply_into(std::span<const Complex> in, std::span<Complex> out) const;

  DerivativeBackend backend_;
  Grid grid_;
  std::optional<FourierTransform> fft_;
  std::vector<double> multiplier_;
};

}  // namespace diraclab
