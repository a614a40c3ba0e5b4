#pragma once

#include <cstddef>
#include <unordered_set>
#include <vector>

#include "subspace/rng.hpp"

namespace subspace {

enum class ReplacementMode { with_replacement, without_replacement };

/// A drawn index subset: sorted, distinct, each in [0, n).
struct TupleDraw {
  std::vector<int> indices;
  bool operator==(const TupleDraw&) const = default;
};

struct TupleDrawHash {
  std::size_t operator()(const TupleDraw& t) const noexcept;
};

using SeenTuples = std::unordered_set<TupleDraw, TupleDrawHash>;

/// C(n, q), saturated at `cap` if the true value exceeds it.
long long subset_count_capped(int n, int q, long long cap);

/// Uniformly random q-subset of {0, ..., n-1} (Floyd's algorithm).
TupleDraw sample_tuple(int n, int q, RngStream& rng);

/// Uniformly random q-subset not yet present in `seen`, by rejection.  The
/// caller inserts the result into `seen`.  Throws SamplerExhaustedError once
/// every subset has been seen.
TupleDraw sample_tuple_without_replacement(int n, int q, const SeenTuples& seen,
                                           RngStream& rng);

}  // namespace subspace
