#include "diraclab/derivative.hpp"

#include <cmath>
#include <numbers>
#include <string>

#include "diraclab/errors.hpp"

namespace diraclab {

const char* to_string(DerivativeKind kind) {
  return kind == DerivativeKind::spectral ? "spectral" : "central2";
}

DerivativeKind derivative_kind_from_string(const std::string& name) {
  if (name == "spectral") return DerivativeKind::spectral;
  if (name == "central2") return DerivativeKind::central2;
  throw DomainError("unknown derivative backend '" + name + "'");
}

Differentiator::Differentiator(DerivativeBackend backend, const Grid& grid)
    : backend_(backend), grid_(grid) {
  if (backend.kind != DerivativeKind::spectral) return;
  if (!grid.periodic()) {
    throw DomainError("spectral differentiation requires a periodic grid");
  }
  const int n = grid.size();
  fft_.emplace(n);
  multiplier_ = wavenumbers(grid);
  if (n % 2 == 0) multiplier_[n / 2] = 0.0;
}

void Differentiator::apply_into(std::span<const Complex> in, std::span<Complex> out) const {
  const int n = grid_.size();
  const double h = grid_.spacing();
  if (backend_.kind == DerivativeKind::spectral) {
    std::vector<Complex> spectrum(n);
    fft_->forward(in, spectrum);
    for (int j = 0; j < n; ++j) spectrum[j] *= Complex(0.0, multiplier_[j] / n);
    fft_->backward(spectrum, out);
    return;
  }
  const double c = 0.5 / h;
  for (int k = 1; k + 1 < n; ++k) out[k] = c * (in[k + 1] - in[k - 1]);
  if (grid_.periodic()) {
    out[0] = c * (in[1] - in[n - 1]);
    out[n - 1] = c * (in[0] - in[n - 2]);
  } else {
    out[0] = c * (-3.0 * in[0] + 4.0 * in[1] - in[2]);
    out[n - 1] = c * (3.0 * in[n - 1] - 4.0 * in[n - 2] + in[n - 3]);
  }
}

std::vector<Complex> Differentiator::apply(std::span<const Complex> values) const {
  if (values.size() != static_cast<std::size_t>(grid_.size())) {
    throw DomainError("differentiate: series length does not match grid");
  }
  std::vector<Complex> out(values.size());
  apply_into(values, out);
  return out;
}

std::vector<Complex> Differentiator::apply_interleaved(std::span<const Complex> values,
                                                       int width) const {
  const int n = grid_.size();
  if (values.size() != static_cast<std::size_t>(n) * width) {
    throw DomainError("differentiate: interleaved data does not match grid");
  }
  std::vector<Complex> out(values.size());
  std::vector<Complex> series(n), derivative(n);
  for (int c = 0; c < width; ++c) {
    for (int k = 0; k < n; ++k) series[k] = values[static_cast<std::size_t>(k) * width + c];
    apply_into(series, derivative);
    for (int k = 0; k < n; ++k) out[static_cast<std::size_t>(k) * width + c] = derivative[k];
  }
  return out;
}

SpinorField Differentiator::apply(const SpinorField& f) const {
  if (!(f.grid() == grid_)) throw DomainError("differentiate: field lives on another grid");
  const auto& v = f.stacked();
  auto d = apply_interleaved(std::span<const Complex>(v.data(), v.size()), f.width());
  return SpinorField(grid_, f.m(), Eigen::Map<CVector>(d.data(), d.size()));
}

RMatrix Differentiator::matrix() const {
  const int n = grid_.size();
  const double h = grid_.spacing();
  RMatrix d = RMatrix::Zero(n, n);
  if (backend_.kind == DerivativeKind::spectral) {
    // Entries of the derivative of the periodic trigonometric interpolant,
    // scaled from period 2*pi to the grid length.
    const double scale = 2.0 * std::numbers::pi / grid_.length();
    const double step = 2.0 * std::numbers::pi / n;
    for (int j = 0; j < n; ++j) {
      for (int k = 0; k < n; ++k) {
        if (j == k) continue;
        const int diff = j - k;
        const double sign = (diff % 2 == 0) ? 1.0 : -1.0;
        const double half = 0.5 * diff * step;
        const double value = (n % 2 == 0) ? 0.5 * sign / std::tan(half)
                                          : 0.5 * sign / std::sin(half);
        d(j, k) = scale * value;
      }
    }
    return d;
  }
  const double c = 0.5 / h;
  for (int k = 1; k + 1 < n; ++k) {
    d(k, k + 1) = c;
    d(k, k - 1) = -c;
  }
  if (grid_.periodic()) {
    d(0, 1) = c;
    d(0, n - 1) = -c;
    d(n - 1, 0) = c;
    d(n - 1, n - 2) = -c;
  } else {
    d(0, 0) = -3.0 * c;
    d(0, 1) = 4.0 * c;
    d(0, 2) = -c;
    d(n - 1, n - 1) = 3.0 * c;
    d(n - 1, n - 2) = -4.0 * c;
    d(n - 1, n - 3) = c;
  }
  return d;
}

}  // namespace diraclab
