#include "diraclab/fields.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "diraclab/errors.hpp"

namespace diraclab {

MatrixPotential::MatrixPotential(Grid grid, int m, std::vector<Complex> data, Symmetry symmetry)
    : grid_(grid), m_(m), data_(std::move(data)), symmetric_(symmetry == Symmetry::enforce) {
  if (m < 1) throw DomainError("potential: block dimension must be positive");
  const auto expected = static_cast<std::size_t>(grid_.size()) * m * m;
  if (data_.size() != expected) {
    throw DomainError("potential: expected " + std::to_string(expected) + " entries, got " +
                      std::to_string(data_.size()));
  }
  for (const auto& v : data_) {
    if (!std::isfinite(v.real()) || !std::isfinite(v.imag())) {
      throw DomainError("potential: non-finite sample");
    }
  }
  if (!symmetric_) return;

  const double defect = asymmetry();
  const double scale = std::max(1.0, max_norm());
  if (defect > kSymmetryTolerance * scale) {
    throw DomainError("potential: samples are not symmetric (max |Q - Q^T| = " +
                      std::to_string(defect) + "); pass allow_asymmetric to proceed");
  }
  for (int k = 0; k < grid_.size(); ++k) {
    Complex* block = data_.data() + static_cast<std::size_t>(k) * m_ * m_;
    for (int j = 0; j < m_; ++j) {
      for (int i = j + 1; i < m_; ++i) {
        const Complex avg = 0.5 * (block[i + j * m_] + block[j + i * m_]);
        block[i + j * m_] = avg;
        block[j + i * m_] = avg;
      }
    }
  }
}

namespace {

std::vector<Complex> flatten(const Grid& grid, const std::vector<CMatrix>& samples) {
  if (samples.size() != static_cast<std::size_t>(grid.size())) {
    throw DomainError("potential: sample count does not match grid");
  }
  const auto m = samples.empty() ? 0 : samples.front().rows();
  std::vector<Complex> data;
  data.reserve(samples.size() * m * m);
  for (const auto& s : samples) {
    if (s.rows() != m || s.cols() != m) throw DomainError("potential: inconsistent sample shape");
    data.insert(data.end(), s.data(), s.data() + s.size());
  }
  return data;
}

int block_size(const std::vector<CMatrix>& samples) {
  return samples.empty() ? 0 : static_cast<int>(samples.front().rows());
}

}  // namespace

MatrixPotential::MatrixPotential(Grid grid, const std::vector<CMatrix>& samples,
                                 Symmetry symmetry)
    : MatrixPotential(grid, block_size(samples), flatten(grid, samples), symmetry) {}

MatrixPotential MatrixPotential::zero(const Grid& grid, int m) {
  return MatrixPotential(grid, m,
                         std::vector<Complex>(static_cast<std::size_t>(grid.size()) * m * m));
}

std::vector<Complex> MatrixPotential::entry_series(int i, int j) const {
  std::vector<Complex> out(grid_.size());
  for (int k = 0; k < grid_.size(); ++k) {
    out[k] = data_[static_cast<std::size_t>(k) * m_ * m_ + i + j * m_];
  }
  return out;
}

double MatrixPotential::asymmetry() const {
  double worst = 0.0;
  for (int k = 0; k < grid_.size(); ++k) {
    const auto q = sample(k);
    worst = std::max(worst, max_abs(q - q.transpose()));
  }
  return worst;
}

double MatrixPotential::max_norm() const {
  double worst = 0.0;
  for (const auto& v : data_) worst = std::max(worst, std::abs(v));
  return worst;
}

SpinorField::SpinorField(Grid grid, int m, CVector stacked)
    : grid_(grid), m_(m), data_(std::move(stacked)) {
  if (m < 1) throw DomainError("spinor field: block dimension must be positive");
  if (data_.size() != static_cast<Eigen::Index>(grid_.size()) * 2 * m) {
    throw DomainError("spinor field: stacked vector has wrong length");
  }
}

SpinorField SpinorField::zero(const Grid& grid, int m) {
  return SpinorField(grid, m, CVector::Zero(static_cast<Eigen::Index>(grid.size()) * 2 * m));
}

std::vector<Complex> SpinorField::component(int c) const {
  std::vector<Complex> out(grid_.size());
  for (int k = 0; k < grid_.size(); ++k) out[k] = data_[static_cast<Eigen::Index>(k) * 2 * m_ + c];
  return out;
}

void SpinorField::set_component(int c, const std::vector<Complex>& values) {
  for (int k = 0; k < grid_.size(); ++k) data_[static_cast<Eigen::Index>(k) * 2 * m_ + c] = values[k];
}

Complex inner_product(const SpinorField& a, const SpinorField& b) {
  require_same_layout(a, b, "inner_product");
  // Eigen's dot() is conjugate-linear in the first argument.
  return a.grid().spacing() * b.stacked().dot(a.stacked());
}

double l2_norm(const SpinorField& f) {
  return std::sqrt(f.grid().spacing()) * f.stacked().norm();
}

void require_same_layout(const MatrixPotential& q, const SpinorField& f, const char* where) {
  if (!(q.grid() == f.grid()) || q.m() != f.m()) {
    throw DomainError(std::string(where) + ": potential and field live on different grids");
  }
}

void require_same_layout(const SpinorField& a, const SpinorField& b, const char* where) {
  if (!(a.grid() == b.grid()) || a.m() != b.m()) {
    throw DomainError(std::string(where) + ": fields live on different grids");
  }
}

}  // namespace diraclab
