#pragma once
#include <cmath>
#include <cstdint>
#include <numbers>

namespace wkin {

// splitmix64; identical streams on every platform, one instance per concern
// so reorderings elsewhere cannot shift draws
struct Rng {
  uint64_t state;

  explicit Rng(uint64_t seed) : state(seed) {}

  uint64_t next() {
    uint64_t z = (state += 0x9e3779b97f4a7c15ull);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
    return z ^ (z >> 31);
  }
  // [0,1)
  double uniform() { return double(next() >> 11) * 0x1.0p-53; }
  double uniform(double a, double b) { return a + (b - a) * uniform(); }
  uint64_t below(uint64_t n) { return next() % n; }
  double normal() {
    // Box-Muller, fresh pair each call keeps the stream position fixed
    double u1 = uniform(), u2 = uniform();
    while (u1 == 0.0) u1 = uniform();
    return std::sqrt(-2.0 * std::log(u1)) *
           std::cos(2.0 * std::numbers::pi * u2);
  }
  // derive an independent stream (distinct odd offset per label)
  Rng fork(uint64_t label) const {
    Rng r(state ^ (0x632be59bd9b4e019ull * (2 * label + 1)));
    r.next();
    return r;
  }
};

}  // namespace wkin
