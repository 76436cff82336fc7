#pragma once

#include <cstdint>

namespace fairdiv {

/// Purposes that get their own independent substream.
enum class Stream : std::uint64_t {
  kItemType = 1,
  kAssignment = 2,
  kValue = 3,
  kGridSample = 4,
  kInstance = 5,
  kProperty = 6,
};

/// Counter-based generator keyed by (seed, stream, index). Draws for one key
/// never depend on how many draws were made under another key, so e.g. the
/// item-type sequence is unchanged when value noise is reconfigured.
class CounterRng {
 public:
  CounterRng(std::uint64_t seed, Stream stream, std::uint64_t index = 0);
  CounterRng(std::uint64_t seed, std::uint64_t stream, std::uint64_t index = 0);

  std::uint64_t next_u64();
  /// Uniform on [0, 1).
  double uniform();
  /// Uniform on [lo, hi).
  double uniform(double lo, double hi);
  /// Uniform integer on [0, bound); bound must be positive.
  std::uint64_t below(std::uint64_t bound);
  /// Standard normal (Box–Muller).
  double normal();
  /// Exponential with rate 1.
  double exponential();

 private:
  std::uint64_t key_;
  std::uint64_t counter_ = 0;
};

std::uint64_t splitmix64(std::uint64_t x);

}  // namespace fairdiv
