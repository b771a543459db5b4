#pragma once
// Deterministic random streams.  Every random draw in the project flows from
// one 64-bit base seed through derive_seed(base, stage-tag, index), so any
// household / bootstrap replication / meta-replication can be reproduced in
// isolation and results never depend on scheduling.

#include <cmath>
#include <cstdint>
#include <random>
#include <string_view>

namespace passthru {

inline std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

inline std::uint64_t fnv1a64(std::string_view s) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char ch : s) {
    h ^= ch;
    h *= 0x100000001b3ULL;
  }
  return h;
}

// Child seed for (stage, index).  Two rounds of splitmix decorrelate sibling
// streams even for adjacent indices.
inline std::uint64_t derive_seed(std::uint64_t base, std::string_view tag,
                                 std::uint64_t index = 0) {
  std::uint64_t s = splitmix64(base ^ fnv1a64(tag));
  return splitmix64(s + 0x9e3779b97f4a7c15ULL * (index + 1));
}

class Rng {
 public:
  explicit Rng(std::uint64_t seed) : gen_(seed) {}

  // uniform double in [0, 1) with 53 random bits
  double uniform() { return static_cast<double>(gen_() >> 11) * 0x1.0p-53; }

  // standard normal via the Marsaglia polar method (no libm distribution
  // objects: those are not bit-stable across standard libraries)
  double normal() {
    if (have_spare_) {
      have_spare_ = false;
      return spare_;
    }
    double u, v, s;
    do {
      u = 2.0 * uniform() - 1.0;
      v = 2.0 * uniform() - 1.0;
      s = u * u + v * v;
    } while (s >= 1.0 || s == 0.0);
    double m = std::sqrt(-2.0 * std::log(s) / s);
    spare_ = v * m;
    have_spare_ = true;
    return u * m;
  }

  std::uint64_t next_u64() { return gen_(); }

  // unbiased integer in [0, n)
  std::uint64_t below(std::uint64_t n) {
    std::uint64_t threshold = (-n) % n;  // 2^64 mod n
    std::uint64_t x;
    do {
      x = gen_();
    } while (x < threshold);
    return x % n;
  }

 private:
  std::mt19937_64 gen_;
  bool have_spare_ = false;
  double spare_ = 0.0;
};

}  // namespace passthru
