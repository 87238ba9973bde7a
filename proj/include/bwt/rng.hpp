#pragma once

#include <cstdint>
#include <utility>
#include <vector>

namespace bwt {

// SplitMix64 in counter mode: output i is mix64(key + (i + 1) * golden).
// Every random decision in the library draws from this generator so that a
// (seed, stream) pair reproduces bit-identical results on any platform.
class Rng {
 public:
  explicit Rng(std::uint64_t seed, std::uint64_t stream = 0);

  std::uint64_t next();
  double uniform();                        // [0, 1), 53-bit
  std::uint64_t below(std::uint64_t bound);  // [0, bound), unbiased
  bool bernoulli(double p) { return uniform() < p; }

  // Independent child stream; does not advance this generator.
  Rng fork(std::uint64_t tag) const;

  template <class T>
  void shuffle(std::vector<T>& v) {
    for (std::size_t i = v.size(); i > 1; --i) {
      std::size_t j = static_cast<std::size_t>(below(i));
      std::swap(v[i - 1], v[j]);
    }
  }

  std::vector<int> permutation(int n);
  // Uniform m-subset of [0, n), returned sorted.
  std::vector<int> sample(int n, int m);

  static std::uint64_t mix64(std::uint64_t z);

 private:
  std::uint64_t key_;
  std::uint64_t counter_ = 0;
};

}  // namespace bwt
