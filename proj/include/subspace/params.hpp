#pragma once

#include "subspace/errors.hpp"

namespace subspace {

/// Scene/experiment parameter tuple.  Every subspace shares the same
/// dimension d and inlier count m; m0 points are background outliers; the
/// total point count is always n() = K*m + m0.
struct TheoryParams {
  int d = 1;
  int p = 2;
  int m = 2;
  int m0 = 0;
  int K = 1;

  int n() const noexcept { return K * m + m0; }

  void validate() const {
    if (d < 1 || d >= p) throw InvalidInputError("params: need 1 <= d < p");
    if (m < d + 1) throw InvalidInputError("params: need m >= d + 1");
    if (m0 < 0) throw InvalidInputError("params: m0 must be >= 0");
    if (K < 1) throw InvalidInputError("params: K must be >= 1");
  }
};

}  // namespace subspace
