#pragma once

#include <cmath>
#include <cstdint>
#include <string_view>

namespace cf {

inline std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

inline std::uint64_t fnv1a64(std::string_view s) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : s) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

// Counter-based deterministic generator. A stream is identified by a key;
// named/indexed substreams derive fresh keys, so independent workers can
// draw from disjoint streams and any fixed (seed, substream path) replays
// bit-identically regardless of how work was scheduled.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : key_(splitmix64(seed ^ 0x6a09e667f3bcc908ULL)) {}

  Rng sub(std::string_view name) const { return from_key(splitmix64(key_ ^ fnv1a64(name))); }
  // stream identity, recorded by samplers so reports can name their source
  std::uint64_t key() const { return key_; }
  Rng sub(std::uint64_t index) const {
    return from_key(splitmix64(key_ ^ (index * 0x9e3779b97f4a7c15ULL + 0x2545f4914f6cdd1dULL)));
  }

  std::uint64_t next_u64() { return splitmix64(key_ ^ ++counter_); }

  // uniform in [0, 1)
  double next_double() { return double(next_u64() >> 11) * 0x1.0p-53; }

  // standard normal via Box-Muller; consumes exactly two uniforms per call
  double normal() {
    double u1 = double((next_u64() >> 11) | 1ULL) * 0x1.0p-53;  // force u1 > 0
    double u2 = next_double();
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(6.283185307179586476925286766559 * u2);
  }

  // rate-1 exponential
  double exponential() { return -std::log1p(-next_double()); }

 private:
  static Rng from_key(std::uint64_t k) {
    Rng r(0);
    r.key_ = k;
    r.counter_ = 0;
    return r;
  }
  std::uint64_t key_;
  std::uint64_t counter_ = 0;
};

}  // namespace cf
