#ifndef RAWSYNTH_RNG_HPP
#define RAWSYNTH_RNG_HPP

#include <cmath>
#include <cstdint>

namespace rawsynth {

/// SplitMix64 finalizer; used to derive independent child seeds from a
/// master seed and an index. Derivations are order-free, so parallel work
/// can be keyed by pixel or recipe index.
inline std::uint64_t splitmix(std::uint64_t seed, std::uint64_t index) {
  std::uint64_t z = seed + index * 0x9e3779b97f4a7c15ULL + 0x9e3779b97f4a7c15ULL;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

/// Deterministic stream generator (PCG32). Single-owner: never share one
/// instance between concurrent tasks; derive children with child().
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : seed_(seed) {
    state_ = 0;
    inc_ = (splitmix(seed, 0x5eedULL) << 1) | 1u;
    next_u32();
    state_ += splitmix(seed, 0);
    next_u32();
  }

  std::uint64_t seed() const { return seed_; }

  /// Independent stream keyed by (this seed, index).
  Rng child(std::uint64_t index) const { return Rng(splitmix(seed_, index)); }

  std::uint32_t next_u32() {
    std::uint64_t old = state_;
    state_ = old * 6364136223846793005ULL + inc_;
    std::uint32_t xorshifted = std::uint32_t(((old >> 18) ^ old) >> 27);
    std::uint32_t rot = std::uint32_t(old >> 59);
    return (xorshifted >> rot) | (xorshifted << ((32 - rot) & 31));
  }

  std::uint64_t next_u64() {
    std::uint64_t hi = next_u32();
    return (hi << 32) | next_u32();
  }

  /// Uniform in [0, 1) with 53 random bits.
  double uniform() { return double(next_u64() >> 11) * 0x1.0p-53; }

  /// Uniform in (0, 1).
  double uniform_open() {
    return (double(next_u64() >> 12) + 0.5) * 0x1.0p-52;
  }

  /// Uniform integer in [0, n).
  std::uint64_t uniform_below(std::uint64_t n) {
    // rejection to kill modulo bias
    std::uint64_t threshold = (0 - n) % n;
    for (;;) {
      std::uint64_t r = next_u64();
      if (r >= threshold) return r % n;
    }
  }

  /// Standard normal draw (Box-Muller, no caching so call counts stay
  /// predictable).
  double gaussian() {
    double u1 = uniform_open();
    double u2 = uniform();
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(6.283185307179586477 * u2);
  }

 private:
  std::uint64_t state_;
  std::uint64_t inc_;
  std::uint64_t seed_;
};

}  // namespace rawsynth

#endif  // RAWSYNTH_RNG_HPP
