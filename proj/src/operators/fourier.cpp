#include "diraclab/fourier.hpp"

#include <fftw3.h>

#include <mutex>
#include <numbers>
#include <utility>

#include "diraclab/errors.hpp"

namespace diraclab {

namespace {

// The FFTW planner is not re-entrant; execution with fftw_execute_dft is.
std::mutex& planner_mutex() {
  static std::mutex mutex;
  return mutex;
}

fftw_complex* as_fftw(Complex* p) { return reinterpret_cast<fftw_complex*>(p); }

}  // namespace

FourierTransform::FourierTransform(int n) : n_(n) {
  if (n < 1) throw DomainError("fft: length must be positive");
  std::vector<Complex> a(n), b(n);
  std::lock_guard lock(planner_mutex());
  const unsigned flags = FFTW_ESTIMATE | FFTW_UNALIGNED;
  forward_plan_ = fftw_plan_dft_1d(n, as_fftw(a.data()), as_fftw(b.data()), FFTW_FORWARD, flags);
  backward_plan_ =
      fftw_plan_dft_1d(n, as_fftw(a.data()), as_fftw(b.data()), FFTW_BACKWARD, flags);
  if (forward_plan_ == nullptr || backward_plan_ == nullptr) {
    release();
    throw ComputationalError("fft: planner failed");
  }
}

FourierTransform::~FourierTransform() { release(); }

FourierTransform::FourierTransform(FourierTransform&& other) noexcept
    : n_(other.n_),
      forward_plan_(std::exchange(other.forward_plan_, nullptr)),
      backward_plan_(std::exchange(other.backward_plan_, nullptr)) {}

FourierTransform& FourierTransform::operator=(FourierTransform&& other) noexcept {
  if (this != &other) {
    release();
    n_ = other.n_;
    forward_plan_ = std::exchange(other.forward_plan_, nullptr);
    backward_plan_ = std::exchange(other.backward_plan_, nullptr);
  }
  return *this;
}

void FourierTransform::release() {
  std::lock_guard lock(planner_mutex());
  if (forward_plan_ != nullptr) fftw_destroy_plan(static_cast<fftw_plan>(forward_plan_));
  if (backward_plan_ != nullptr) fftw_destroy_plan(static_cast<fftw_plan>(backward_plan_));
  forward_plan_ = nullptr;
  backward_plan_ = nullptr;
}

void FourierTransform::forward(std::span<const Complex> in, std::span<Complex> out) const {
  // FFTW does not write to the input of an out-of-place c2c transform.
  fftw_execute_dft(static_cast<fftw_plan>(forward_plan_),
                   as_fftw(const_cast<Complex*>(in.data())), as_fftw(out.data()));
}

void FourierTransform::backward(std::span<const Complex> in, std::span<Complex> out) const {
  fftw_execute_dft(static_cast<fftw_plan>(backward_plan_),
                   as_fftw(const_cast<Complex*>(in.data())), as_fftw(out.data()));
}

std::vector<double> wavenumbers(const Grid& grid) {
  const int n = grid.size();
  const double base = 2.0 * std::numbers::pi / grid.length();
  std::vector<double> k(n);
  for (int j = 0; j < n; ++j) k[j] = base * (j <= (n - 1) / 2 ? j : j - n);
  return k;
}

}  // namespace diraclab
