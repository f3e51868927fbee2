#pragma once

#include <cstdint>
#include <random>
#include <optional>
#include <string_view>

namespace swsyk {

/// SplitMix64 finalizer (Steele, Lea, Flood 2014). Bijective on 64-bit words.
constexpr std::uint64_t splitmix64(std::uint64_t x) noexcept {
  x += 0x9E3779B97F4A7C15ULL;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
  return x ^ (x >> 31);
}

/// Independent seed streams used by the experiment pipeline.
enum class StreamTag : std::uint64_t {
  graph = 0x67726170685F5F5FULL,     // "graph___"
  coupling = 0x636F75706C696E67ULL,  // "coupling"
  solver = 0x736F6C7665725F5FULL,    // "solver__"
};

/// Counter-mode seed derivation:
///   derive_seed(b, t, i) = splitmix64(splitmix64(b ^ t) + splitmix64(i + 1)).
/// For a fixed (base, tag) the map index -> seed is a composition of
/// bijections with an addition, hence injective in the index.
constexpr std::uint64_t derive_seed(std::uint64_t base, StreamTag tag, std::uint64_t index) noexcept {
  return splitmix64(splitmix64(base ^ static_cast<std::uint64_t>(tag)) + splitmix64(index + 1));
}

/// Substream k of a seed; used for rejection attempts and internal splits.
constexpr std::uint64_t substream(std::uint64_t seed, std::uint64_t k) noexcept {
  return splitmix64(seed ^ splitmix64(0xA5A5A5A5A5A5A5A5ULL + k));
}

std::optional<StreamTag> parse_stream_tag(std::string_view name);

/// Portable random source: std::mt19937_64 (bit-exact across standard
/// libraries) with hand-written variate transforms, because the
/// std::*_distribution algorithms are implementation-defined.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(splitmix64(seed)) {}

  std::uint64_t next_u64() { return engine_(); }

  /// Uniform double in [0, 1) with 53 random bits.
  double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

  /// Uniform integer in [0, n), unbiased by rejection.
  std::uint64_t uniform_index(std::uint64_t n);

  /// Standard normal via the Marsaglia polar method (pairs cached).
  double normal();

 private:
  std::mt19937_64 engine_;
  double spare_ = 0.0;
  bool has_spare_ = false;
};

}  // namespace swsyk
