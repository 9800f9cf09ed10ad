#pragma once

#include <cstdint>
#include <random>

namespace bellopt {

// SplitMix64 finalizer (Steele, Lea, Flood 2014). Used to derive independent
// seeds for restarts and sweep points from one base seed.
constexpr std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9E3779B97F4A7C15ULL;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
  return x ^ (x >> 31);
}

// Seed of restart r: splitmix64(seed ^ (r + 1) * golden-ratio constant).
constexpr std::uint64_t restart_seed(std::uint64_t seed, int restart) {
  return splitmix64(seed ^ (static_cast<std::uint64_t>(restart + 1) * 0x9E3779B97F4A7C15ULL));
}

// Portable uniform doubles on top of std::mt19937_64, whose output sequence
// is fixed by the standard; the distribution classes are not.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  // 53 random bits scaled into [0, 1).
  double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }
  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

 private:
  std::mt19937_64 engine_;
};

}  // namespace bellopt
