#pragma once

#include <functional>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include <json.hpp>

#include "diraclab/fields.hpp"
#include "diraclab/operators.hpp"
#include "diraclab/types.hpp"

namespace diraclab {

enum class Provenance { dense, shooting };

const char* to_string(Provenance p);

/// Multiset of spectral parameters z (M(Q)F = zF), unordered.
struct SpectrumSample {
  std::vector<Complex> eigenvalues;
  Provenance provenance = Provenance::dense;
  std::string label;
  int m = 0;
  std::optional<Grid> grid;
  /// Shooting only: lattice candidates whose polish did not converge.
  int dropped_candidates = 0;
};

/// All eigenvalues of a dense operator matrix. Throws DomainError above
/// `cap` and ComputationalError if the eigensolver fails.
SpectrumSample dense_spectrum(const OperatorMatrix& a, Eigen::Index cap = kDenseDimensionCap);

struct SearchBox {
  double re_min = -1.0;
  double re_max = 1.0;
  double im_min = 0.05;
  double im_max = 5.0;
};

struct ShootingOptions {
  int max_secant_steps = 50;
  /// Polished roots satisfy |a(z)| <= tolerance.
  double tolerance = 1e-10;
  /// Largest integration step used for the coarse lattice scan.
  double scan_step = 0.02;
  /// Combine a(z) at steps h and 2h by Richardson extrapolation during the
  /// polish (the stepper is symmetric, so its error expands in h^2).
  bool extrapolate = true;
};

/// Transmission-denominator coefficient a(z) for a scalar (m = 1) potential:
/// integrates F1' = -izF1 + qF2, F2' = izF2 - conj(q)F1 from
/// F(x_first) = (exp(-iz x_first), 0) with the midpoint exponential over
/// every `stride`-th sample and returns F1 exp(iz x_last).
Complex transmission_coefficient(const MatrixPotential& q, Complex z, int stride = 1);

/// Zeros of a(z) inside the search box: scans a grid_density x grid_density
/// lattice for local minima of |a| and polishes each with the secant method.
/// Requires m = 1 and |q| <= 1e-6 at both ends of the grid.
SpectrumSample shooting_discrete_eigenvalues(const MatrixPotential& q, const SearchBox& box,
                                             int grid_density = 40,
                                             const ShootingOptions& options = {});

using Region = std::function<bool(Complex)>;

/// Region Im z > min_im.
Region above_imaginary(double min_im);

struct MatchingResult {
  double distance = 0.0;
  /// Both filtered samples were empty.
  bool empty = false;
  std::size_t matched_pairs = 0;
};

/// Filters both samples by `region`, keeps the top_k entries by |Im z|,
/// pairs them greedily by increasing distance and returns the largest paired
/// distance; an unpaired element contributes its |Im z|.
MatchingResult spectrum_matching_distance(const SpectrumSample& a, const SpectrumSample& b,
                                          int top_k, const Region& region);

/// `re,im` header then one eigenvalue per row, 17 significant digits.
void write_spectrum_csv(std::ostream& out, const SpectrumSample& s);
nlohmann::json spectrum_metadata(const SpectrumSample& s);

}  // namespace diraclab
