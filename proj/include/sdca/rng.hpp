#ifndef SDCA_RNG_HPP
#define SDCA_RNG_HPP

#include <cstdint>
#include <limits>

namespace sdca {

// Counter-based generator: the k-th output is a fixed mixing function of
// (seed, k), so a run is reproducible from the seed alone.
class counter_rng {
 public:
  using result_type = std::uint64_t;

  explicit counter_rng(std::uint64_t seed = 0) noexcept : key_(mix(seed ^ 0x6a09e667f3bcc909ULL)) {}

  static constexpr result_type min() noexcept { return 0; }
  static constexpr result_type max() noexcept {
    return std::numeric_limits<result_type>::max();
  }

  result_type operator()() noexcept { return mix(key_ + 0x9e3779b97f4a7c15ULL * ++counter_); }

  // Uniform over {0, ..., bound - 1}; rejection removes modulo bias.
  std::uint64_t uniform_index(std::uint64_t bound) noexcept {
    const std::uint64_t limit = max() - max() % bound;
    std::uint64_t r;
    do {
      r = (*this)();
    } while (r >= limit);
    return r % bound;
  }

  // Uniform in [0, 1) with 53 random bits.
  double uniform01() noexcept { return static_cast<double>((*this)() >> 11) * 0x1.0p-53; }

  std::uint64_t counter() const noexcept { return counter_; }

 private:
  static constexpr std::uint64_t mix(std::uint64_t z) noexcept {
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  }

  std::uint64_t key_;
  std::uint64_t counter_ = 0;
};

}  // namespace sdca

#endif
