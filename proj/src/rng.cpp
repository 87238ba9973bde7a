#include "bwt/rng.hpp"

#include <algorithm>
#include <numeric>

namespace bwt {

namespace {
constexpr std::uint64_t kGolden = 0x9E3779B97F4A7C15ULL;
}

std::uint64_t Rng::mix64(std::uint64_t z) {
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

Rng::Rng(std::uint64_t seed, std::uint64_t stream)
    : key_(mix64(seed) ^ mix64(stream * kGolden + 0x632BE59BD9B4E019ULL)) {}

std::uint64_t Rng::next() {
  ++counter_;
  return mix64(key_ + counter_ * kGolden);
}

double Rng::uniform() {
  return static_cast<double>(next() >> 11) * 0x1.0p-53;
}

std::uint64_t Rng::below(std::uint64_t bound) {
  if (bound <= 1) return 0;
  // Lemire's multiply-shift with rejection.
  unsigned __int128 m = static_cast<unsigned __int128>(next()) * bound;
  auto low = static_cast<std::uint64_t>(m);
  if (low < bound) {
    std::uint64_t threshold = (0 - bound) % bound;
    while (low < threshold) {
      m = static_cast<unsigned __int128>(next()) * bound;
      low = static_cast<std::uint64_t>(m);
    }
  }
  return static_cast<std::uint64_t>(m >> 64);
}

Rng Rng::fork(std::uint64_t tag) const {
  Rng child(0);
  child.key_ = mix64(key_ ^ mix64(tag + kGolden));
  return child;
}

std::vector<int> Rng::permutation(int n) {
  std::vector<int> v(static_cast<std::size_t>(std::max(n, 0)));
  std::iota(v.begin(), v.end(), 0);
  shuffle(v);
  return v;
}

std::vector<int> Rng::sample(int n, int m) {
  m = std::clamp(m, 0, std::max(n, 0));
  // Partial Fisher-Yates.
  std::vector<int> v(static_cast<std::size_t>(n));
  std::iota(v.begin(), v.end(), 0);
  for (int i = 0; i < m; ++i) {
    int j = i + static_cast<int>(below(static_cast<std::uint64_t>(n - i)));
    std::swap(v[i], v[j]);
  }
  v.resize(static_cast<std::size_t>(m));
  std::sort(v.begin(), v.end());
  return v;
}

}  // namespace bwt
