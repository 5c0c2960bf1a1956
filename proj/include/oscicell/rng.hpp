#pragma once

#include <cstdint>

namespace oscicell {

// splitmix64 finalizer; used both as a generator step and to derive substreams.
inline std::uint64_t mix64(std::uint64_t z) {
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

// Deterministic, platform-independent generator (splitmix64). std::mt19937_64
// would also be reproducible, but uniform_real_distribution is not specified
// bit-exactly across standard libraries, so we convert ourselves.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : state_(seed) {}

  std::uint64_t next() {
    std::uint64_t z = (state_ += 0x9e3779b97f4a7c15ULL);
    return mix64(z);
  }

  // uniform in [0,1), 53-bit resolution
  double u01() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

  double uniform(double a, double b) { return a + (b - a) * u01(); }

  // unbiased uniform integer in [0,n)
  std::uint64_t below(std::uint64_t n) {
    const std::uint64_t threshold = (0 - n) % n;
    for (;;) {
      const std::uint64_t r = next();
      if (r >= threshold) return r % n;
    }
  }

 private:
  std::uint64_t state_;
};

// Independent stream for (seed, a, b), e.g. (seed, step, node-index).
inline Rng substream(std::uint64_t seed, std::uint64_t a, std::uint64_t b) {
  return Rng(mix64(seed ^ mix64(a + 0x9e3779b97f4a7c15ULL) ^
                   mix64(b + 0x632be59bd9b4e019ULL)));
}

}  // namespace oscicell
