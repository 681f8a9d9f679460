#pragma once

#include <span>
#include <vector>

#include "diraclab/grid.hpp"
#include "diraclab/types.hpp"

namespace diraclab {

/// Complex DFT of fixed length backed by FFTW plans. Both directions are
/// unnormalized; backward(forward(x)) == n * x.
class FourierTransform {
 public:
  explicit FourierTransform(int n);
  ~FourierTransform();
  FourierTransform(FourierTransform&& other) noexcept;
  FourierTransform& operator=(FourierTransform&& other) noexcept;
  FourierTransform(const FourierTransform&) = delete;
  FourierTransform& operator=(const FourierTransform&) = delete;

  int size() const { return n_; }
  void forward(std::span<const Complex> in, std::span<Complex> out) const;
  void backward(std::span<const Complex> in, std::span<Complex> out) const;

 private:
  void release();

  int n_ = 0;
  void* forward_plan_ = nullptr;
  void* backward_plan_ = nullptr;
};

/// Angular wavenumbers 2*pi*j/L in FFT order (j = 0, 1, ..., -1) for a
/// periodic grid. The Nyquist entry (even n) is reported as -pi*n/L.
std::vector<double> wavenumbers(const Grid& grid);

}  // namespace diraclab
