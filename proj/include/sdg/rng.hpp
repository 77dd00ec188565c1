#pragma once

#include <cstdint>
#include <limits>
#include <span>
#include <utility>

namespace sdg {

/// Counter-based generator: output i of stream (seed, stream) is
/// splitmix64_mix(key + i * 0x9E3779B97F4A7C15), key derived from both ids.
/// Every draw is a pure function of (seed, stream, counter), so any stream can
/// be reproduced on any platform and independent rows can be sampled in
/// parallel by giving each row its own stream.
///
/// Derived quantities (uniform doubles, bounded integers, shuffles) are
/// implemented here instead of via <random> distributions, whose algorithms
/// differ between standard libraries.
class CounterRng {
 public:
  using result_type = std::uint64_t;

  explicit CounterRng(std::uint64_t seed, std::uint64_t stream = 0) noexcept
      : key_(derive_key(seed, stream)) {}

  static constexpr result_type min() noexcept { return 0; }
  static constexpr result_type max() noexcept {
    return std::numeric_limits<result_type>::max();
  }

  static constexpr std::uint64_t mix(std::uint64_t z) noexcept {
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
  }

  static constexpr std::uint64_t derive_key(std::uint64_t seed,
                                            std::uint64_t stream) noexcept {
    return mix(mix(seed) ^ mix(stream + 0x632BE59BD9B4E019ULL));
  }

  result_type operator()() noexcept {
    ++counter_;
    return mix(key_ + counter_ * kGolden);
  }

  /// Uniform in [0, 1) with 53 random bits.
  double uniform() noexcept {
    return static_cast<double>((*this)() >> 11) * 0x1.0p-53;
  }

  bool bernoulli(double p) noexcept { return uniform() < p; }

  /// Uniform integer in [0, bound); bound must be positive.
  std::uint64_t below(std::uint64_t bound) noexcept {
    // Lemire's multiply-shift with rejection of the biased low range.
    unsigned __int128 m = static_cast<unsigned __int128>((*this)()) * bound;
    auto low = static_cast<std::uint64_t>(m);
    if (low < bound) {
      const std::uint64_t threshold = (0 - bound) % bound;
      while (low < threshold) {
        m = static_cast<unsigned __int128>((*this)()) * bound;
        low = static_cast<std::uint64_t>(m);
      }
    }
    return static_cast<std::uint64_t>(m >> 64);
  }

  template <typename T>
  void shuffle(std::span<T> items) noexcept {
    for (std::size_t i = items.size(); i > 1; --i) {
      const auto j = static_cast<std::size_t>(below(i));
      std::swap(items[i - 1], items[j]);
    }
  }

  /// Independent child stream; does not advance this generator.
  CounterRng fork(std::uint64_t stream) const noexcept {
    return CounterRng(key_, stream, Tag{});
  }

  std::uint64_t counter() const noexcept { return counter_; }

 private:
  struct Tag {};
  CounterRng(std::uint64_t parent_key, std::uint64_t stream, Tag) noexcept
      : key_(derive_key(parent_key, stream)) {}

  static constexpr std::uint64_t kGolden = 0x9E3779B97F4A7C15ULL;
  std::uint64_t key_;
  std::uint64_t counter_ = 0;
};

}  // namespace sdg
