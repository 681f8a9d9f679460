#include "diraclab/potentials.hpp"

#include <cmath>
#include <numbers>
#include <random>
#include <string>

#include "diraclab/errors.hpp"

namespace diraclab {

Complex ScalarProfile::operator()(double x) const {
  switch (kind) {
    case Kind::zero:
      return {0.0, 0.0};
    case Kind::constant:
      return amplitude;
    case Kind::sech:
      return amplitude / std::cosh(rate * x);
    case Kind::plane_wave:
      return amplitude * std::exp(kI * (wavenumber * x));
  }
  return {0.0, 0.0};
}

namespace {

void require_length(std::size_t got, int m, const char* what) {
  if (got != static_cast<std::size_t>(m)) {
    throw DomainError(std::string("potential: ") + what + " needs " + std::to_string(m) +
                      " entries, got " + std::to_string(got));
  }
}

// Fourier coefficients C_{-K..K}, drawn in a fixed order so the seed fully
// determines the potential.
std::vector<CMatrix> bandlimited_coefficients(const RandomBandlimitedShape& s, int m) {
  if (s.max_mode < 0) throw DomainError("potential: max_mode must be non-negative");
  if (!(s.period > 0.0)) throw DomainError("potential: period must be positive");
  std::mt19937_64 rng(s.seed);
  std::normal_distribution<double> normal(0.0, s.amplitude * std::sqrt(0.5));
  std::vector<CMatrix> coeffs;
  for (int k = -s.max_mode; k <= s.max_mode; ++k) {
    CMatrix c(m, m);
    for (int i = 0; i < m; ++i) {
      for (int j = 0; j < m; ++j) {
        const double re = normal(rng);
        const double im = normal(rng);
        c(i, j) = Complex(re, im);
      }
    }
    coeffs.emplace_back(0.5 * (c + c.transpose()));
  }
  return coeffs;
}

struct Evaluator {
  int m;
  double x;
  const std::vector<CMatrix>* coeffs;  // random-bandlimited only

  CMatrix operator()(const ZeroShape&) const { return CMatrix::Zero(m, m); }
  CMatrix operator()(const ConstantShape& s) const { return s.value; }
  CMatrix operator()(const SechShape& s) const {
    CMatrix q = CMatrix::Zero(m, m);
    for (int j = 0; j < m; ++j) {
      const double b = s.rates.empty() ? s.amplitudes[j] : s.rates[j];
      q(j, j) = s.amplitudes[j] / std::cosh(b * (x - s.center));
    }
    return q;
  }
  CMatrix operator()(const PlaneWaveShape& s) const {
    CMatrix q = CMatrix::Zero(m, m);
    const Complex phase = std::exp(kI * (s.wavenumber * x));
    for (int j = 0; j < m; ++j) q(j, j) = s.amplitudes[j] * phase;
    return q;
  }
  CMatrix operator()(const RandomBandlimitedShape& s) const {
    CMatrix q = CMatrix::Zero(m, m);
    const double base = 2.0 * std::numbers::pi * x / s.period;
    for (int k = -s.max_mode; k <= s.max_mode; ++k) {
      q += (*coeffs)[k + s.max_mode] * std::exp(kI * (base * k));
    }
    return q;
  }
  CMatrix operator()(const ColumnShape& s) const {
    CMatrix q = CMatrix::Zero(m, m);
    for (int j = 0; j < m; ++j) q(j, 0) = s.entries[j](x);
    return q;
  }
};

void validate(const PotentialSpec& spec, int m) {
  if (m < 1) throw DomainError("potential: block dimension must be positive");
  if (const auto* c = std::get_if<ConstantShape>(&spec.shape)) {
    if (c->value.rows() != m || c->value.cols() != m) {
      throw DomainError("potential: constant matrix must be m x m");
    }
    if (!spec.allow_asymmetric && max_abs(c->value - c->value.transpose()) > 0.0) {
      throw DomainError("potential: constant matrix is not symmetric; set allow_asymmetric");
    }
  } else if (const auto* s = std::get_if<SechShape>(&spec.shape)) {
    require_length(s->amplitudes.size(), m, "sech amplitudes");
    if (!s->rates.empty()) require_length(s->rates.size(), m, "sech rates");
  } else if (const auto* p = std::get_if<PlaneWaveShape>(&spec.shape)) {
    require_length(p->amplitudes.size(), m, "plane-wave amplitudes");
  } else if (const auto* col = std::get_if<ColumnShape>(&spec.shape)) {
    require_length(col->entries.size(), m, "column entries");
    if (m >= 2 && !spec.allow_asymmetric) {
      throw DomainError("potential: column shape is asymmetric for m >= 2; set allow_asymmetric");
    }
  }
}

}  // namespace

CMatrix evaluate_potential(const PotentialSpec& spec, double x, int m) {
  validate(spec, m);
  std::vector<CMatrix> coeffs;
  if (const auto* r = std::get_if<RandomBandlimitedShape>(&spec.shape)) {
    coeffs = bandlimited_coefficients(*r, m);
  }
  return std::visit(Evaluator{m, x, &coeffs}, spec.shape);
}

MatrixPotential sample_potential(const PotentialSpec& spec, const Grid& grid, int m) {
  validate(spec, m);
  std::vector<CMatrix> coeffs;
  if (const auto* r = std::get_if<RandomBandlimitedShape>(&spec.shape)) {
    coeffs = bandlimited_coefficients(*r, m);
  }
  std::vector<Complex> data;
  data.reserve(static_cast<std::size_t>(grid.size()) * m * m);
  for (int k = 0; k < grid.size(); ++k) {
    const CMatrix q = std::visit(Evaluator{m, grid.point(k), &coeffs}, spec.shape);
    data.insert(data.end(), q.data(), q.data() + q.size());
  }
  return MatrixPotential(grid, m, std::move(data),
                         spec.allow_asymmetric ? Symmetry::allow_asymmetric : Symmetry::enforce);
}

}  // namespace diraclab
