#pragma once

#include <array>
#include <cmath>
#include <cstdint>

namespace fcnn {

// Pinned PRNG stack used everywhere randomness appears, so that identical
// seeds give bit-identical fields on every platform. Algorithms:
//   - seeding: SplitMix64 (state += 0x9E3779B97F4A7C15, xor-shift-multiply mix)
//   - stream:  xoshiro256++ (Blackman/Vigna), state filled from SplitMix64
//   - doubles: 53-bit mantissa construction, (x >> 11) * 2^-53 in [0,1)
//   - normals: Box-Muller transform, cosine branch first, sine branch cached
// Never swap any of these for a std:: engine; golden-file tests pin the
// exact output sequences.

class SplitMix64 {
 public:
  explicit SplitMix64(std::uint64_t seed) : state_(seed) {}

  std::uint64_t next() {
    std::uint64_t z = (state_ += 0x9E3779B97F4A7C15ull);
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
    return z ^ (z >> 31);
  }

 private:
  std::uint64_t state_;
};

class Xoshiro256pp {
 public:
  explicit Xoshiro256pp(std::uint64_t seed) {
    SplitMix64 sm(seed);
    for (auto& word : state_) word = sm.next();
  }

  std::uint64_t next() {
    const std::uint64_t result = rotl(state_[0] + state_[3], 23) + state_[0];
    const std::uint64_t t = state_[1] << 17;
    state_[2] ^= state_[0];
    state_[3] ^= state_[1];
    state_[1] ^= state_[2];
    state_[0] ^= state_[3];
    state_[2] ^= t;
    state_[3] = rotl(state_[3], 45);
    return result;
  }

  // Uniform double in [0, 1).
  double uniform01() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

  // Uniform double in [-amplitude, +amplitude].
  double uniform_symmetric(double amplitude) {
    return amplitude * (2.0 * uniform01() - 1.0);
  }

  // Standard normal via Box-Muller; consumes two uniforms per pair of
  // variates and caches the sine branch.
  double gaussian() {
    if (has_spare_) {
      has_spare_ = false;
      return spare_;
    }
    // u1 in (0,1] keeps the log finite.
    const double u1 = static_cast<double>((next() >> 11) + 1) * 0x1.0p-53;
    const double u2 = uniform01();
    const double r = std::sqrt(-2.0 * std::log(u1));
    const double theta = 2.0 * 3.14159265358979323846 * u2;
    spare_ = r * std::sin(theta);
    has_spare_ = true;
    return r * std::cos(theta);
  }

 private:
  static std::uint64_t rotl(std::uint64_t x, int k) {
    return (x << k) | (x >> (64 - k));
  }

  std::array<std::uint64_t, 4> state_{};
  bool has_spare_ = false;
  double spare_ = 0.0;
};

// Derives an independent stream seed from a base seed and a small salt.
// Used to split one user-facing seed into disjoint streams (data, noise,
// validation, weight init, ...) without the streams overlapping.
inline std::uint64_t derive_seed(std::uint64_t base, std::uint64_t salt) {
  return SplitMix64(base ^ (salt * 0x9E3779B97F4A7C15ull)).next();
}

}  // namespace fcnn
