#pragma once

#include <cstdint>
#include <utility>
#include <vector>

namespace geoloc {

/// SplitMix64 step; also used to derive independent child seeds.
std::uint64_t splitmix64(std::uint64_t& state);

/// Seed for the index-th child stream of `seed`.
std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t index);

/// Small deterministic generator (xoshiro256**). The standard distributions
/// are implementation-defined, so sampling helpers are defined here to keep
/// results identical across standard libraries.
class Rng {
 public:
  explicit Rng(std::uint64_t seed);

  std::uint64_t next();
  /// Uniform in [0, bound), unbiased. bound must be positive.
  std::uint64_t below(std::uint64_t bound);
  /// Uniform in [0, 1) with 53 random bits.
  double uniform();
  /// Standard normal via Box-Muller.
  double normal();

  template <typename T>
  void shuffle(std::vector<T>& items) {
    for (std::size_t i = items.size(); i > 1; --i) {
      const auto j = static_cast<std::size_t>(below(i));
      std::swap(items[i - 1], items[j]);
    }
  }

 private:
  std::uint64_t s_[4];
};

}  // namespace geoloc
