#pragma once

#include <cstdint>

namespace subspace {

/// Deterministic counter-style random stream: a SplitMix64 core with a
/// per-stream odd increment, following Steele, Lea & Flood's SplittableRandom
/// construction.  The same (master_seed, stream_id) pair always reproduces
/// the same sequence, and distinct stream ids select distinct increments, so
/// independent streams can be handed to concurrent trials without
/// coordination.
class RngStream {
 public:
  /// Identifier recorded in run metadata so results can be reproduced.
  static constexpr const char* kAlgorithm = "splitmix64-streams-v1";

  RngStream(std::uint64_t master_seed, std::uint64_t stream_id);

  std::uint64_t master_seed() const noexcept { return master_seed_; }
  std::uint64_t stream_id() const noexcept { return stream_id_; }

  /// Next 64 uniformly random bits.
  std::uint64_t next_u64() noexcept;

  /// Uniform integer in [0, bound), bound >= 1.  Rejection based, so free of
  /// modulo bias.
  std::uint64_t uniform_below(std::uint64_t bound);

  /// Uniform double in [0, 1) with 53-bit resolution.
  double uniform_double() noexcept;

  /// Standard normal deviate (Box-Muller, the spare half is cached).
  double normal() noexcept;

 private:
  std::uint64_t master_seed_;
  std::uint64_t stream_id_;
  std::uint64_t state_;
  std::uint64_t gamma_;
  double spare_ = 0.0;
  bool has_spare_ = false;
};

}  // namespace subspace
