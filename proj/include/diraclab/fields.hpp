#pragma once

#include <vector>

#include "diraclab/grid.hpp"
#include "diraclab/types.hpp"

namespace diraclab {

enum class Symmetry {
  /// Q(x_k) = Q(x_k)^T is required (up to roundoff) and stored exactly.
  enforce,
  /// No symmetry requirement; the potential is flagged as outside the
  /// standing symmetric-potential hypothesis.
  allow_asymmetric,
};

/// Sampled m x m complex matrix field Q(x_k) on a grid.
///
/// Samples are stored contiguously, one column-major m x m block per grid
/// point. With Symmetry::enforce the constructor rejects samples whose
/// asymmetry exceeds `kSymmetryTolerance` (relative to the largest entry) and
/// stores the exact symmetrization, so sample(k) == sample(k).transpose()
/// holds bit for bit afterwards.
class MatrixPotential {
 public:
  static constexpr double kSymmetryTolerance = 1e-10;

  MatrixPotential(Grid grid, int m, std::vector<Complex> data,
                  Symmetry symmetry = Symmetry::enforce);
  MatrixPotential(Grid grid, const std::vector<CMatrix>& samples,
                  Symmetry symmetry = Symmetry::enforce);

  static MatrixPotential zero(const Grid& grid, int m);

  int m() const { return m_; }
  const Grid& grid() const { return grid_; }
  int size() const { return grid_.size(); }
  bool symmetric() const { return symmetric_; }

  Eigen::Map<const CMatrix> sample(int k) const {
    return Eigen::Map<const CMatrix>(data_.data() + static_cast<std::size_t>(k) * m_ * m_, m_,
                                     m_);
  }
  /// Values of entry (i, j) at every grid point.
  std::vector<Complex> entry_series(int i, int j) const;
  const std::vector<Complex>& data() const { return data_; }

  /// max_k ||Q(x_k) - Q(x_k)^T||_inf
  double asymmetry() const;
  /// max_k ||Q(x_k)||_inf
  double max_norm() const;

 private:
  Grid grid_;
  int m_;
  std::vector<Complex> data_;
  bool symmetric_;
};

/// Sampled C^{2m}-valued field F = (F1, F2); entries 0..m-1 of each sample
/// form F1, entries m..2m-1 form F2.
///
/// The stacked vector is sample-major: index k*2m + c.
class SpinorField {
 public:
  SpinorField(Grid grid, int m, CVector stacked);
  static SpinorField zero(const Grid& grid, int m);

  int m() const { return m_; }
  int width() const { return 2 * m_; }
  const Grid& grid() const { return grid_; }
  int size() const { return grid_.size(); }

  const CVector& stacked() const { return data_; }
  CVector& stacked() { return data_; }

  auto sample(int k) const { return data_.segment(static_cast<Eigen::Index>(k) * 2 * m_, 2 * m_); }
  auto sample(int k) { return data_.segment(static_cast<Eigen::Index>(k) * 2 * m_, 2 * m_); }
  auto upper(int k) const { return data_.segment(static_cast<Eigen::Index>(k) * 2 * m_, m_); }
  auto upper(int k) { return data_.segment(static_cast<Eigen::Index>(k) * 2 * m_, m_); }
  auto lower(int k) const {
    return data_.segment(static_cast<Eigen::Index>(k) * 2 * m_ + m_, m_);
  }
  auto lower(int k) { return data_.segment(static_cast<Eigen::Index>(k) * 2 * m_ + m_, m_); }

  /// Values of component c (0 <= c < 2m) at every grid point.
  std::vector<Complex> component(int c) const;
  void set_component(int c, const std::vector<Complex>& values);

 private:
  Grid grid_;
  int m_;
  CVector data_;
};

/// Grid inner product h * sum_k <a_k, b_k>, linear in the first slot.
Complex inner_product(const SpinorField& a, const SpinorField& b);
/// Norm induced by inner_product.
double l2_norm(const SpinorField& f);

void require_same_layout(const MatrixPotential& q, const SpinorField& f, const char* where);
void require_same_layout(const SpinorField& a, const SpinorField& b, const char* where);

}  // namespace diraclab
