#pragma once

#include <vector>

namespace diraclab {

/// Uniform 1-D sampling of [x_min, x_max].
///
/// Periodic grids omit the right endpoint (h = L/n); line grids include
/// both endpoints (h = L/(n-1)). Sample k sits at x_min + k*h.
class Grid {
 public:
  /// Throws DomainError unless x_min < x_max and n >= 4.
  Grid(double x_min, double x_max, int n, bool periodic);

  double x_min() const { return x_min_; }
  double x_max() const { return x_max_; }
  int size() const { return n_; }
  bool periodic() const { return periodic_; }
  double spacing() const { return h_; }
  double length() const { return x_max_ - x_min_; }

  double point(int k) const { return x_min_ + k * h_; }
  std::vector<double> points() const;

  /// Sample nearest x = 0, or 0 when the origin lies outside the interval.
  int anchor_index() const;

  bool operator==(const Grid& other) const = default;

 private:
  double x_min_;
  double x_max_;
  int n_;
  bool periodic_;
  double h_;
};

Grid make_grid(double x_min, double x_max, int n, bool periodic);

}  // namespace diraclab
