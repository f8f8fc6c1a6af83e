#pragma once

#include <cstdint>
#include <initializer_list>
#include <random>
#include <vector>

namespace permpoly {

// Deterministic RNG wrapper.  std::mt19937_64 has a fully specified output
// sequence, and we avoid std::uniform_int_distribution (whose mapping is
// implementation defined) so that identical seeds give identical draws on
// every platform.
struct Rng {
  std::mt19937_64 gen;

  explicit Rng(std::uint64_t seed) : gen(seed) {}

  std::uint64_t next() { return gen(); }

  // Uniform value in [0, n).  Rejection sampling on the top of the range to
  // kill modulo bias; the loop terminates almost immediately in practice.
  std::uint64_t below(std::uint64_t n) {
    if (n <= 1) return 0;
    const std::uint64_t limit = UINT64_MAX - UINT64_MAX % n;
    std::uint64_t v;
    do {
      v = gen();
    } while (v >= limit);
    return v % n;
  }

  bool coin(std::uint64_t num = 1, std::uint64_t den = 2) { return below(den) < num; }
};

inline std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

// Collapse a list of values into one seed.  Used to derive independent
// per-trial seeds so that sweep trials are order independent.
inline std::uint64_t mix_seed(std::initializer_list<std::uint64_t> parts) {
  std::uint64_t acc = 0x243f6a8885a308d3ULL;
  for (std::uint64_t v : parts) acc = splitmix64(acc ^ v);
  return acc;
}

template <typename T>
void shuffle_vec(std::vector<T>& v, Rng& rng) {
  for (std::size_t i = v.size(); i > 1; --i) {
    std::size_t j = static_cast<std::size_t>(rng.below(i));
    std::swap(v[i - 1], v[j]);
  }
}

}  // namespace permpoly
