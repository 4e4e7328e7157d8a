#pragma once

#include <cstdint>
#include <random>

#include "confhess/linalg.hpp"

namespace confhess {

// Seeded deterministic RNG; every randomized routine takes one of these (or a
// seed) explicitly so reports can record the seed and reruns are bit-stable.
class Rng {
 public:
  explicit Rng(uint64_t seed) : eng_(seed) {}

  double uniform(double lo, double hi) {
    return std::uniform_real_distribution<double>(lo, hi)(eng_);
  }
  int uniform_int(int lo, int hi) {  // inclusive bounds
    return std::uniform_int_distribution<int>(lo, hi)(eng_);
  }
  double normal(double mean = 0.0, double sd = 1.0) {
    return std::normal_distribution<double>(mean, sd)(eng_);
  }
  Vec uniform_vec(int n, double lo, double hi) {
    Vec v(n);
    for (int i = 0; i < n; ++i) v[i] = uniform(lo, hi);
    return v;
  }
  std::mt19937_64& engine() { return eng_; }

 private:
  std::mt19937_64 eng_;
};

// Van der Corput radical inverse in the given base.
inline double radical_inverse(uint64_t index, int base) {
  double inv = 1.0 / base, f = inv, x = 0.0;
  while (index > 0) {
    x += f * static_cast<double>(index % base);
    index /= base;
    f *= inv;
  }
  return x;
}

// Halton point in [0,1)^dim; seed acts as a start-index offset so different
// seeds give different (still deterministic) scatters.
inline Vec halton_point(uint64_t index, int dim, uint64_t seed_offset = 0) {
  static const int primes[] = {2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41, 43, 47, 53};
  Vec p(dim);
  for (int d = 0; d < dim; ++d) p[d] = radical_inverse(index + 1 + seed_offset, primes[d]);
  return p;
}

}  // namespace confhess
