#include <iomanip>
#include <limits>

#include "diraclab/errors.hpp"
#include "diraclab/linalg.hpp"
#include "diraclab/serialization.hpp"
#include "diraclab/spectral.hpp"

namespace diraclab {

const char* to_string(Provenance p) { return p == Provenance::dense ? "dense" : "shooting"; }

SpectrumSample dense_spectrum(const OperatorMatrix& a, Eigen::Index cap) {
  if (a.dim() > cap) {
    throw DomainError("dense_spectrum: dimension " + std::to_string(a.dim()) +
                      " exceeds cap " + std::to_string(cap));
  }
  SpectrumSample s;
  s.eigenvalues = general_eigenvalues(a.entries);
  s.provenance = Provenance::dense;
  s.label = a.label;
  s.m = a.m;
  s.grid = a.grid;
  return s;
}

void write_spectrum_csv(std::ostream& out, const SpectrumSample& s) {
  const auto old_precision = out.precision(std::numeric_limits<double>::max_digits10);
  out << "re,im\n";
  for (const auto& z : s.eigenvalues) out << z.real() << ',' << z.imag() << '\n';
  out.precision(old_precision);
}

nlohmann::json spectrum_metadata(const SpectrumSample& s) {
  nlohmann::json doc = {{"provenance", to_string(s.provenance)},
                        {"label", s.label},
                        {"m", s.m},
                        {"count", s.eigenvalues.size()},
                        {"dropped_candidates", s.dropped_candidates}};
  if (s.grid) doc["grid"] = grid_to_json(*s.grid);
  return doc;
}

}  // namespace diraclab
