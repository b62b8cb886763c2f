#pragma once

#include <array>
#include <cstdint>

#include "errors.hpp"

namespace cyclesampler {

/// Deterministic pseudo-random generator used by every sampling component.
///
/// This is xoshiro256++ (Blackman & Vigna), chosen over std::mt19937 because
/// its output sequence is fixed by the algorithm itself rather than by a
/// library implementation, so identical seeds give identical streams on any
/// platform and standard library.  Period 2^256 - 1.
///
/// The three draw primitives below are the *only* ways the sampler consumes
/// randomness, and each consumes a well-defined number of raw 64-bit words:
///   - next()       : one word
///   - below(n)     : one word, plus more only in the (rare) rejection loop
///   - unit()       : one word
/// Keeping this accounting stable is what makes runs reproducible across
/// releases, so any change here is a compatibility break.
class Xoshiro256PlusPlus {
 public:
  using result_type = std::uint64_t;

  /// Seeds the four state words by iterating SplitMix64 over `seed`, the
  /// initialization recommended by the xoshiro authors.  Any seed value is
  /// acceptable, including zero.
  explicit Xoshiro256PlusPlus(std::uint64_t seed = 0) {
    std::uint64_t x = seed;
    for (auto& word : state_) {
      // SplitMix64 step.
      x += 0x9e3779b97f4a7c15ULL;
      std::uint64_t z = x;
      z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
      z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
      word = z ^ (z >> 31);
    }
  }

  /// Next raw 64-bit word.
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

  /// Exactly uniform integer in [0, n).  Uses Lemire's multiply-shift with a
  /// rejection step for the biased region, so no modulo bias for any n.
  std::uint64_t below(std::uint64_t n) {
    if (n == 0) throw argument_error("below(0) is undefined");
    std::uint64_t x = next();
    __uint128_t m = static_cast<__uint128_t>(x) * n;
    auto low = static_cast<std::uint64_t>(m);
    if (low < n) {
      const std::uint64_t threshold = (0ULL - n) % n;  // 2^64 mod n
      while (low < threshold) {
        x = next();
        m = static_cast<__uint128_t>(x) * n;
        low = static_cast<std::uint64_t>(m);
      }
    }
    return static_cast<std::uint64_t>(m >> 64);
  }

  /// Uniform double in [0, 1): the top 53 bits of one word scaled by 2^-53.
  double unit() {
    return static_cast<double>(next() >> 11) * 0x1.0p-53;
  }

  /// Uniform double in [lo, hi].  Both endpoints are attainable up to
  /// rounding.  A degenerate interval (lo == hi) returns lo exactly but
  /// still consumes one word, keeping the per-call stream cost fixed.
  double uniform(double lo, double hi) {
    const double u = unit();
    if (lo == hi) return lo;
    return lo + u * (hi - lo);
  }

  // UniformRandomBitGenerator interface, so the generator can also feed
  // std::shuffle and friends in test code.
  static constexpr std::uint64_t min() { return 0; }
  static constexpr std::uint64_t max() { return ~0ULL; }
  std::uint64_t operator()() { return next(); }

 private:
  static std::uint64_t rotl(std::uint64_t x, int k) {
    return (x << k) | (x >> (64 - k));
  }

  std::array<std::uint64_t, 4> state_;
};

}  // namespace cyclesampler
