#include "diraclab/involutions.hpp"

#include "diraclab/errors.hpp"

namespace diraclab {

BlockInvolutions::BlockInvolutions(int block) : m(block) {
  if (block < 1) throw DomainError("involutions: block dimension must be positive");
  const auto id = CMatrix::Identity(m, m);
  sigma1 = CMatrix::Zero(2 * m, 2 * m);
  sigma1.topRightCorner(m, m) = id;
  sigma1.bottomLeftCorner(m, m) = id;
  sigma3 = CMatrix::Zero(2 * m, 2 * m);
  sigma3.topLeftCorner(m, m) = id;
  sigma3.bottomRightCorner(m, m) = -id;
}

SpinorField apply_conjugation_J(const SpinorField& f) {
  SpinorField out = SpinorField::zero(f.grid(), f.m());
  for (int k = 0; k < f.size(); ++k) {
    out.upper(k) = f.lower(k).conjugate();
    out.lower(k) = f.upper(k).conjugate();
  }
  return out;
}

}  // namespace diraclab
