// Seeded RNG helpers with implementation-independent derived draws, so that
// equal (config, seed) means byte-identical generator output everywhere.

#ifndef FORGE_RNG_HPP_
#define FORGE_RNG_HPP_

#include <cstdint>
#include <random>
#include <vector>

namespace forge {

class Rng {
public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  std::uint64_t bits() { return engine_(); }

  // Uniform in [0, n); n > 0. Rejection sampling keeps the draw unbiased and
  // independent of std::uniform_int_distribution's library-specific stream.
  std::uint64_t below(std::uint64_t n) {
    const std::uint64_t limit = UINT64_MAX - UINT64_MAX % n;
    std::uint64_t v = engine_();
    while (v >= limit) v = engine_();
    return v % n;
  }

  int range(int lo, int hi) {  // inclusive bounds
    return lo + static_cast<int>(below(static_cast<std::uint64_t>(hi - lo + 1)));
  }

  double unit() {  // [0, 1)
    return static_cast<double>(engine_() >> 11) * 0x1.0p-53;
  }

  bool coin(double p = 0.5) { return unit() < p; }

  template <typename T>
  const T& pick(const std::vector<T>& v) {
    return v[static_cast<std::size_t>(below(v.size()))];
  }

  template <typename T>
  void shuffle(std::vector<T>& v) {
    for (std::size_t i = v.size(); i > 1; --i)
      std::swap(v[i - 1], v[static_cast<std::size_t>(below(i))]);
  }

  // Weighted index draw; weights need not be normalized.
  std::size_t weighted(const std::vector<double>& weights) {
    double total = 0;
    for (double w : weights) total += w;
    double x = unit() * total;
    for (std::size_t i = 0; i < weights.size(); ++i) {
      x -= weights[i];
      if (x < 0) return i;
    }
    return weights.size() - 1;
  }

private:
  std::mt19937_64 engine_;
};

}  // namespace forge

#endif  // FORGE_RNG_HPP_
