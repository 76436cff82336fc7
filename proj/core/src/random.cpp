#include "fairdiv/random.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace fairdiv {

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

CounterRng::CounterRng(std::uint64_t seed, Stream stream, std::uint64_t index)
    : CounterRng(seed, static_cast<std::uint64_t>(stream), index) {}

CounterRng::CounterRng(std::uint64_t seed, std::uint64_t stream, std::uint64_t index)
    : key_(splitmix64(splitmix64(splitmix64(seed) ^ stream) ^ index)) {}

std::uint64_t CounterRng::next_u64() { return splitmix64(key_ + 0x632be59bd9b4e019ULL * ++counter_); }

double CounterRng::uniform() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

double CounterRng::uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

std::uint64_t CounterRng::below(std::uint64_t bound) {
  if (bound == 0) throw std::invalid_argument("CounterRng::below: bound must be positive");
  const std::uint64_t limit = -bound % bound;  // 2^64 mod bound
  while (true) {
    const std::uint64_t r = next_u64();
    if (r >= limit) return r % bound;
  }
}

double CounterRng::normal() {
  const double u1 = 1.0 - uniform();  // (0, 1]
  const double u2 = uniform();
  return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
}

double CounterRng::exponential() { return -std::log(1.0 - uniform()); }

}  // namespace fairdiv
