#pragma once

#include <cmath>
#include <cstdint>

namespace casnet {

// splitmix64 finalizer; full-avalanche mix of a 64-bit word.
constexpr std::uint64_t mix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ull;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ull;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebull;
  return x ^ (x >> 31);
}

// Counter-based RNG: every draw is a pure function of (key, counter), so
// values can be generated in any order, from any thread, and still come
// out identical run to run.  split() derives an independent stream.
class CounterRng {
 public:
  explicit CounterRng(std::uint64_t seed, std::uint64_t stream = 0)
      : key_(mix64(mix64(seed) ^ mix64(stream ^ 0xa02bdbf7bb3c0a7ull))) {}

  CounterRng split(std::uint64_t lane) const {
    CounterRng r(0);
    r.key_ = mix64(key_ ^ mix64(lane + 0x632be59bd9b4e019ull));
    return r;
  }

  std::uint64_t bits(std::uint64_t counter) const {
    return mix64(key_ ^ mix64(counter));
  }

  // uniform in [0, 1), 53-bit resolution
  double u01(std::uint64_t counter) const {
    return static_cast<double>(bits(counter) >> 11) * 0x1.0p-53;
  }

  // uniform integer in [lo, hi] inclusive
  std::int64_t uniform_int(std::uint64_t counter, std::int64_t lo,
                           std::int64_t hi) const {
    const std::uint64_t span = static_cast<std::uint64_t>(hi - lo) + 1;
    return lo + static_cast<std::int64_t>(bits(counter) % span);
  }

  // standard normal via Box-Muller; consumes counters 2c and 2c+1
  double gaussian(std::uint64_t counter) const {
    double u1 = u01(2 * counter);
    if (u1 < 0x1.0p-53) u1 = 0x1.0p-53;
    const double u2 = u01(2 * counter + 1);
    return std::sqrt(-2.0 * std::log(u1)) *
           std::cos(2.0 * 3.14159265358979323846 * u2);
  }

 private:
  std::uint64_t key_;
};

}  // namespace casnet
