#pragma once

#include <cmath>
#include <cstdint>
#include <initializer_list>
#include <random>
#include <span>
#include <string_view>
#include <vector>

namespace estgraph {

// All randomness funnels through this wrapper. We take the raw 64-bit
// stream of mt19937_64 (bit-exact across standard libraries) and derive
// bounded ints, doubles and gaussians ourselves, because the std
// distributions are free to differ between libstdc++ versions and that
// would break byte-identical reruns.

inline uint64_t splitmix64(uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

// Combine seed components (master seed, graph index, method, trial, ...)
// into one stream seed. Order-sensitive by design.
inline uint64_t mix_seed(std::initializer_list<uint64_t> parts) {
  uint64_t h = 0x8f1bbcdcbfa53e0bULL;
  for (uint64_t p : parts) h = splitmix64(h ^ p);
  return h;
}

// FNV-1a, used to fold string identifiers (graph ids, method names,
// prompt texts) into seed components and replay keys
constexpr uint64_t fnv1a64(std::string_view s) {
  uint64_t h = 1469598103934665603ULL;
  for (char c : s) {
    h ^= (unsigned char)c;
    h *= 1099511628211ULL;
  }
  return h;
}

class Rng {
 public:
  explicit Rng(uint64_t seed) : eng_(seed) {}

  uint64_t u64() { return eng_(); }

  // unbiased integer in [0, n), Lemire's multiply-shift rejection
  uint64_t below(uint64_t n) {
    __uint128_t m = (__uint128_t)u64() * (__uint128_t)n;
    auto lo = (uint64_t)m;
    if (lo < n) {
      uint64_t t = (0 - n) % n;
      while (lo < t) {
        m = (__uint128_t)u64() * (__uint128_t)n;
        lo = (uint64_t)m;
      }
    }
    return (uint64_t)(m >> 64);
  }

  // [0, 1), 53-bit resolution
  double unit() { return (double)(u64() >> 11) * 0x1.0p-53; }

  // (0, 1], safe as a log() argument
  double unit_pos() { return (double)((u64() >> 11) + 1) * 0x1.0p-53; }

  double uniform(double lo, double hi) { return lo + (hi - lo) * unit(); }

  // standard normal, Box-Muller, fixed two draws per generated pair
  double normal() {
    if (have_spare_) {
      have_spare_ = false;
      return spare_;
    }
    double u1 = unit_pos();
    double u2 = unit();
    double r = std::sqrt(-2.0 * std::log(u1));
    double a = 6.283185307179586476925286766559 * u2;
    spare_ = r * std::sin(a);
    have_spare_ = true;
    return r * std::cos(a);
  }

  double gaussian(double mean, double stddev) { return mean + stddev * normal(); }

  // number of misses before the first hit at success probability p;
  // the geometric-skip trick for sparse G(n,p) sampling
  uint64_t skip(double p) {
    if (p >= 1.0) return 0;
    double g = std::log(unit_pos()) / std::log1p(-p);
    if (g >= 9.2e18) return UINT64_MAX;
    return (uint64_t)g;
  }

  template <typename T>
  void shuffle(std::vector<T>& v) {
    for (size_t i = v.size(); i > 1; --i) {
      size_t j = below(i);
      std::swap(v[i - 1], v[j]);
    }
  }

  template <typename T>
  const T& pick(std::span<const T> v) {
    return v[below(v.size())];
  }

 private:
  std::mt19937_64 eng_;
  double spare_ = 0.0;
  bool have_spare_ = false;
};

}  // namespace estgraph
