#pragma once

#include <cstdint>
#include <initializer_list>

namespace mixlab {

// Finalizer of the splitmix64 generator.  Bijective on 64-bit words, so
// distinct (key, counter) pairs below can never collide by construction.
inline std::uint64_t mix64(std::uint64_t z) {
  z ^= z >> 30;
  z *= 0xbf58476d1ce4e5b9ull;
  z ^= z >> 27;
  z *= 0x94d049bb133111ebull;
  z ^= z >> 31;
  return z;
}

// Folds an arbitrary tuple of words into a substream key.  Streams are
// identified structurally, e.g. (master seed, module tag, time index,
// trial index), so results never depend on which thread asks first.
inline std::uint64_t substream_key(std::initializer_list<std::uint64_t> words) {
  std::uint64_t k = 0x9e3779b97f4a7c15ull;
  for (std::uint64_t w : words) k = mix64((k + 0x9e3779b97f4a7c15ull) ^ w);
  return k;
}

// Counter-based generator: output i is mix64(key + GOLDEN * i).  State is a
// plain counter, so a stream can be split, replayed, or advanced without
// touching any other stream.
class CounterRng {
 public:
  explicit CounterRng(std::uint64_t key) : key_(key) {}

  CounterRng(std::initializer_list<std::uint64_t> words)
      : key_(substream_key(words)) {}

  std::uint64_t next_u64() {
    counter_ += 0x9e3779b97f4a7c15ull;
    return mix64(key_ + counter_);
  }

  // Uniform on [0, 1) with 53 random bits.
  double next_unit() {
    return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
  }

  bool bernoulli(double p) { return next_unit() < p; }

  // Uniform on {0, 1, ..., bound-1}; bound must be positive.  Rejection-free
  // modulo reduction is fine here: bounds are tiny relative to 2^64.
  std::uint64_t next_below(std::uint64_t bound) { return next_u64() % bound; }

 private:
  std::uint64_t key_;
  std::uint64_t counter_ = 0;
};

// Fixed tags keeping unrelated substreams of one master seed disjoint.
namespace stream_tag {
inline constexpr std::uint64_t kGraph = 0x6772617068ull;   // environment snapshots
inline constexpr std::uint64_t kEvolve = 0x65766f6cull;    // evolving-set thresholds
inline constexpr std::uint64_t kTrial = 0x747269616cull;   // per-trial seeds
inline constexpr std::uint64_t kChain = 0x636861696eull;   // synthetic test chains
}  // namespace stream_tag

}  // namespace mixlab
