#pragma once

#include <cstdint>
#include <limits>

namespace secnoma {

/// SplitMix64 finalizer. Bijective on 64-bit words.
constexpr std::uint64_t mix64(std::uint64_t z) noexcept {
  z += 0x9E3779B97F4A7C15ULL;
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

/// Logical sub-streams of one Monte Carlo trial. Every random quantity in a
/// world draws from its own stream so that worlds are reproducible from
/// (master seed, trial index) alone and quantities that a scenario does not
/// need can be skipped without shifting the others.
enum class StreamId : std::uint32_t {
  kUsers = 1,
  kPairLink = 2,
  kEavesdroppersPhase1 = 3,
  kEavesdroppersPhase2 = 4,
};

/// Seed of stream `id` (optionally sub-indexed, e.g. by radial shell) in
/// trial `trial` under `master_seed`.
constexpr std::uint64_t stream_seed(std::uint64_t master_seed, std::uint64_t trial, StreamId id,
                                    std::uint64_t sub = 0) noexcept {
  std::uint64_t h = mix64(master_seed ^ 0x5EC0'0A17'C0DE'0001ULL);
  h = mix64(h ^ trial);
  h = mix64(h ^ (static_cast<std::uint64_t>(id) << 32));
  return mix64(h ^ sub);
}

/// SplitMix64 generator; satisfies UniformRandomBitGenerator. Seeding is O(1),
/// which matters because every trial opens several fresh streams.
class StreamRng {
 public:
  using result_type = std::uint64_t;

  explicit constexpr StreamRng(std::uint64_t seed) noexcept : state_(seed) {}

  static constexpr result_type min() noexcept { return 0; }
  static constexpr result_type max() noexcept { return std::numeric_limits<result_type>::max(); }

  constexpr result_type operator()() noexcept {
    state_ += 0x9E3779B97F4A7C15ULL;
    std::uint64_t z = state_;
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
  }

 private:
  std::uint64_t state_;
};

}  // namespace secnoma
