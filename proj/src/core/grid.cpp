#include "diraclab/grid.hpp"

#include <cmath>
#include <string>

#include "diraclab/errors.hpp"

namespace diraclab {

Grid::Grid(double x_min, double x_max, int n, bool periodic)
    : x_min_(x_min), x_max_(x_max), n_(n), periodic_(periodic), h_(0.0) {
  if (!(x_min < x_max)) {
    throw DomainError("grid: x_min must be smaller than x_max");
  }
  if (n < 4) {
    throw DomainError("grid: need at least 4 samples, got " + std::to_string(n));
  }
  h_ = periodic ? (x_max - x_min) / n : (x_max - x_min) / (n - 1);
}

std::vector<double> Grid::points() const {
  std::vector<double> xs(n_);
  for (int k = 0; k < n_; ++k) xs[k] = point(k);
  return xs;
}

int Grid::anchor_index() const {
  if (x_min_ > 0.0 || x_max_ < 0.0) return 0;
  int k = static_cast<int>(std::lround(-x_min_ / h_));
  if (k >= n_) k = n_ - 1;
  return k;
}

Grid make_grid(double x_min, double x_max, int n, bool periodic) {
  return Grid(x_min, x_max, n, periodic);
}

}  // namespace diraclab
