#include "subspace/rng.hpp"

#include <bit>
#include <cmath>

#include "subspace/errors.hpp"

namespace subspace {
namespace {

constexpr std::uint64_t kGolden = 0x9E3779B97F4B7C15ULL;

// Stafford's "mix13" finalizer, the standard SplitMix64 output function.
std::uint64_t mix64(std::uint64_t z) noexcept {
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

// Variant finalizer used only for increment derivation.
std::uint64_t mix64v(std::uint64_t z) noexcept {
  z = (z ^ (z >> 33)) * 0xFF51AFD7ED558CCDULL;
  z = (z ^ (z >> 33)) * 0xC4CEB9FE1A85EC53ULL;
  return z ^ (z >> 33);
}

// Turns an arbitrary word into a good odd increment: force oddness, then
// reject weak bit patterns as in SplittableRandom.
std::uint64_t mix_gamma(std::uint64_t z) noexcept {
  z = mix64v(z) | 1ULL;
  const int n = std::popcount(z ^ (z >> 1));
  if (n < 24) z ^= 0xAAAAAAAAAAAAAAAAULL;
  return z;
}

}  // namespace

RngStream::RngStream(std::uint64_t master_seed, std::uint64_t stream_id)
    : master_seed_(master_seed), stream_id_(stream_id) {
  state_ = mix64(master_seed + kGolden * (stream_id + 1));
  gamma_ = mix_gamma(state_ ^ mix64(stream_id + 0x1D8AF066F1EB5A5DULL));
}

std::uint64_t RngStream::next_u64() noexcept {
  state_ += gamma_;
  return mix64(state_);
}

std::uint64_t RngStream::uniform_below(std::uint64_t bound) {
  if (bound == 0) throw InvalidInputError("uniform_below: bound must be >= 1");
  // Reject draws from the incomplete final copy of [0, bound).
  const std::uint64_t threshold = -bound % bound;
  for (;;) {
    const std::uint64_t r = next_u64();
    if (r >= threshold) return r % bound;
  }
}

double RngStream::uniform_double() noexcept {
  return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
}

double RngStream::normal() noexcept {
  if (has_spare_) {
    has_spare_ = false;
    return spare_;
  }
  double u, v, s;
  do {
    u = 2.0 * uniform_double() - 1.0;
    v = 2.0 * uniform_double() - 1.0;
    s = u * u + v * v;
  } while (s >= 1.0 || s == 0.0);
  const double f = std::sqrt(-2.0 * std::log(s) / s);
  spare_ = v * f;
  has_spare_ = true;
  return u * f;
}

}  // namespace subspace
