#pragma once

#include <vector>

#include "subspace/linalg.hpp"

namespace subspace {

/// Largest principal angle between the estimated and true subspaces, in
/// radians.  Zero means the smaller subspace is contained in the larger; for
/// equal dimensions, zero means exact recovery.
double recovery_angle(const Subspace& estimated, const Subspace& truth);

/// Rand index between two labelings: the fraction of point pairs on which
/// the two agree (same group in both, or split in both).  Label values are
/// arbitrary; outliers, conventionally labeled 0, count as one ordinary
/// group.  Single-point inputs score 1.
double rand_index(const std::vector<int>& a, const std::vector<int>& b);

}  // namespace subspace
