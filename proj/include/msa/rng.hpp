#pragma once

#include <cmath>
#include <cstdint>

namespace msa {

inline uint64_t splitmix64_next(uint64_t& state) {
  uint64_t z = (state += 0x9e3779b97f4a7c15ull);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
  return z ^ (z >> 31);
}

// xoshiro256++ with hand-rolled distributions, so every draw is identical
// across compilers, platforms, and thread counts. Streams are keyed off a
// root seed by a counter, which lets each realization be computed in
// isolation: scheduling order never changes the results.
class Rng {
 public:
  explicit Rng(uint64_t seed) { reseed(seed); }

  static Rng for_stream(uint64_t root_seed, uint64_t stream) {
    uint64_t sm = root_seed;
    (void)splitmix64_next(sm);
    sm ^= (stream + 1) * 0x9e3779b97f4a7c15ull;
    Rng r(0);
    for (auto& word : r.state_) word = splitmix64_next(sm);
    return r;
  }

  uint64_t next_u64() {
    const uint64_t result = rotl(state_[0] + state_[3], 23) + state_[0];
    const uint64_t t = state_[1] << 17;
    state_[2] ^= state_[0];
    state_[3] ^= state_[1];
    state_[1] ^= state_[2];
    state_[0] ^= state_[3];
    state_[2] ^= t;
    state_[3] = rotl(state_[3], 45);
    return result;
  }

  // Uniform on [0,1), 53-bit resolution.
  double uniform() { return double(next_u64() >> 11) * 0x1.0p-53; }

  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

  // Unit-mean exponential; finite for every draw.
  double exponential() { return -std::log1p(-uniform()); }

  bool bernoulli(double p) { return uniform() < p; }

  // Exact Poisson sampling via the product method, chunked so the floor
  // exp(-mean) never underflows for large means.
  int poisson(double mean) {
    int count = 0;
    while (mean > 30.0) {
      count += poisson_small(30.0);
      mean -= 30.0;
    }
    return count + poisson_small(mean);
  }

 private:
  void reseed(uint64_t seed) {
    uint64_t sm = seed;
    for (auto& word : state_) word = splitmix64_next(sm);
  }

  int poisson_small(double mean) {
    if (mean <= 0.0) return 0;
    const double floor = std::exp(-mean);
    int k = -1;
    double prod = 1.0;
    do {
      ++k;
      prod *= uniform();
    } while (prod > floor);
    return k;
  }

  static uint64_t rotl(uint64_t x, int k) { return (x << k) | (x >> (64 - k)); }

  uint64_t state_[4];
};

}  // namespace msa
