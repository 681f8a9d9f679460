#pragma once

#include "diraclab/fields.hpp"
#include "diraclab/types.hpp"

namespace diraclab {

/// The 2m x 2m block swap sigma1 = (0 I; I 0) and block sign flip
/// sigma3 = (I 0; 0 -I).
struct BlockInvolutions {
  explicit BlockInvolutions(int m);

  int m;
  CMatrix sigma1;
  CMatrix sigma3;
};

/// J = sigma1 C: swaps the two m-blocks and conjugates every entry.
SpinorField apply_conjugation_J(const SpinorField& f);

}  // namespace diraclab
