#pragma once

#include <cmath>
#include <cstdint>
#include <random>

namespace dtdd {

// Deterministic seeded randomness. All simulation draws go through this wrapper so
// that a (seed, stream) pair fully determines every byte of output, independent of
// platform and of how work is split across threads. The engine is std::mt19937_64
// (bit-exact by the standard); the variate transforms are implemented here instead
// of std::*_distribution, whose outputs are implementation-defined.

inline std::uint64_t splitmix64(std::uint64_t z) {
  z += 0x9e3779b97f4a7c15ull;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
  return z ^ (z >> 31);
}

// Order-sensitive combiner for deriving independent substreams from a master seed.
inline std::uint64_t mix_streams(std::uint64_t a, std::uint64_t b) {
  return splitmix64(a ^ (splitmix64(b) + 0x9e3779b97f4a7c15ull + (a << 6) + (a >> 2)));
}

// Domain tags keep unrelated draw sites on disjoint substreams even when their
// numeric ids collide (topology 0 vs slot 0 and so on).
namespace stream_tag {
inline constexpr std::uint64_t kTopology = 0x746f706f1ull;
inline constexpr std::uint64_t kChannel = 0x6368616e1ull;
inline constexpr std::uint64_t kSolver = 0x736f6c761ull;
inline constexpr std::uint64_t kOracle = 0x6f7261631ull;
inline constexpr std::uint64_t kRepetition = 0x726570731ull;
}  // namespace stream_tag

class Rng {
 public:
  explicit Rng(std::uint64_t seed) : eng_(splitmix64(seed)) {}

  static Rng substream(std::uint64_t seed, std::uint64_t stream) {
    return Rng(mix_streams(seed, stream));
  }

  std::uint64_t next_u64() { return eng_(); }

  // Uniform on [0, 1) with 53 random bits.
  double uniform() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

  // Exponential with the given mean (Rayleigh-fading power gain). Always consumes
  // exactly one uniform so parallel draw sites stay stream-aligned even for
  // zero-mean (structurally silent) entries.
  double exponential(double mean) {
    const double u = uniform();
    return mean > 0.0 ? -mean * std::log1p(-u) : 0.0;
  }

  bool bernoulli_half() { return (next_u64() & 1ull) != 0; }

 private:
  std::mt19937_64 eng_;
};

}  // namespace dtdd
