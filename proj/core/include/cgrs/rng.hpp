#pragma once

#include <cstdint>
#include <random>
#include <vector>

namespace cgrs {

/// One splitmix64 step; also usable as a standalone 64-bit mixer.
inline std::uint64_t splitmix64(std::uint64_t& state) {
  std::uint64_t z = (state += 0x9e3779b97f4a7c15ULL);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

/// Derives a child seed from a parent seed and a stream index. Used to give
/// every experiment instance (and every stage within it) an independent,
/// replayable stream.
inline std::uint64_t derive_seed(std::uint64_t parent, std::uint64_t stream) {
  std::uint64_t s = parent ^ (0x9e3779b97f4a7c15ULL + stream);
  splitmix64(s);
  return splitmix64(s);
}

/// Seeded generator with portable bounded draws. std::mt19937_64's output
/// sequence is pinned by the standard; the distribution helpers here are
/// hand-rolled because std::uniform_int_distribution is not.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : gen_(seed) {}

  std::uint64_t next_u64() { return gen_(); }

  /// Uniform integer in [0, bound). bound must be > 0.
  std::uint64_t below(std::uint64_t bound) {
    // rejection sampling over the top of the range to kill modulo bias
    const std::uint64_t limit = ~std::uint64_t{0} - (~std::uint64_t{0} % bound + 1) % bound;
    std::uint64_t x;
    do {
      x = gen_();
    } while (x > limit);
    return x % bound;
  }

  /// Uniform double in [0, 1) with 53 random mantissa bits.
  double unit() { return static_cast<double>(gen_() >> 11) * 0x1.0p-53; }

  /// In-place Fisher-Yates shuffle.
  template <typename T>
  void shuffle(std::vector<T>& v) {
    for (std::size_t i = v.size(); i > 1; --i) {
      std::size_t j = static_cast<std::size_t>(below(i));
      std::swap(v[i - 1], v[j]);
    }
  }

  /// k distinct indices from [0, n), in draw order.
  std::vector<std::size_t> sample_indices(std::size_t n, std::size_t k);

 private:
  std::mt19937_64 gen_;
};

inline std::vector<std::size_t> Rng::sample_indices(std::size_t n, std::size_t k) {
  std::vector<std::size_t> out;
  out.reserve(k);
  if (k >= n) {
    for (std::size_t i = 0; i < n; ++i) out.push_back(i);
    return out;
  }
  // rejection draws; fine while k stays well below n, which is how group
  // sampling uses it
  std::vector<bool> taken(n, false);
  while (out.size() < k) {
    std::size_t i = static_cast<std::size_t>(below(n));
    if (!taken[i]) {
      taken[i] = true;
      out.push_back(i);
    }
  }
  return out;
}

}  // namespace cgrs
