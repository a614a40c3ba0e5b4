#include "subspace/sampling.hpp"

#include <algorithm>

#include "subspace/errors.hpp"

namespace subspace {

std::size_t TupleDrawHash::operator()(const TupleDraw& t) const noexcept {
  // FNV-1a over the index words.
  std::uint64_t h = 0xCBF29CE484222325ULL;
  for (int v : t.indices) {
    h ^= static_cast<std::uint64_t>(static_cast<std::uint32_t>(v));
    h *= 0x100000001B3ULL;
  }
  return static_cast<std::size_t>(h);
}

long long subset_count_capped(int n, int q, long long cap) {
  if (n < 0 || q < 0) throw InvalidInputError("subset_count_capped: negative argument");
  if (cap < 1) throw InvalidInputError("subset_count_capped: cap must be >= 1");
  if (q > n) return 0;
  if (q > n - q) q = n - q;
  unsigned __int128 c = 1;
  for (int i = 1; i <= q; ++i) {
    // Exact at every step: c * (n - q + i) is divisible by i here.
    c = c * static_cast<unsigned>(n - q + i) / static_cast<unsigned>(i);
    if (c > static_cast<unsigned __int128>(cap)) return cap;
  }
  return static_cast<long long>(c);
}

TupleDraw sample_tuple(int n, int q, RngStream& rng) {
  if (q < 1) throw InvalidInputError("sample_tuple: q must be >= 1");
  if (q > n) throw InvalidInputError("sample_tuple: q exceeds population size");
  // Floyd's subset sampling: q draws, no rejection, uniform over subsets.
  TupleDraw t;
  t.indices.reserve(static_cast<std::size_t>(q));
  for (int j = n - q; j < n; ++j) {
    const int v = static_cast<int>(rng.uniform_below(static_cast<std::uint64_t>(j) + 1));
    if (std::find(t.indices.begin(), t.indices.end(), v) != t.indices.end()) {
      t.indices.push_back(j);
    } else {
      t.indices.push_back(v);
    }
  }
  std::sort(t.indices.begin(), t.indices.end());
  return t;
}

TupleDraw sample_tuple_without_replacement(int n, int q, const SeenTuples& seen,
                                           RngStream& rng) {
  const long long total = subset_count_capped(n, q, (1LL << 62));
  if (total == 0) throw InvalidInputError("sample_tuple_without_replacement: q exceeds population size");
  if (static_cast<long long>(seen.size()) >= total)
    throw SamplerExhaustedError("sample_tuple_without_replacement: all subsets drawn");
  for (;;) {
    TupleDraw t = sample_tuple(n, q, rng);
    if (!seen.contains(t)) return t;
  }
}

}  // namespace subspace
