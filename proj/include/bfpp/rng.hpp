#pragma once

#include <cstdint>
#include <random>

namespace bfpp {

/// SplitMix64 finalizer. Used to derive independent replica streams.
constexpr std::uint64_t splitmix64(std::uint64_t x) noexcept {
  x += 0x9E3779B97F4A7C15ULL;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
  return x ^ (x >> 31);
}

/// Seed of replica `k` under master seed `seed`: splitmix64(splitmix64(seed) ^ k).
constexpr std::uint64_t replica_seed(std::uint64_t seed, std::uint64_t k) noexcept {
  return splitmix64(splitmix64(seed) ^ k);
}

/// A caller-owned random stream. All sampling routines take one by reference
/// and advance it; nothing else holds random state.
class RandomStream {
 public:
  explicit RandomStream(std::uint64_t seed) : engine_(seed), seed_(seed) {}

  static RandomStream for_replica(std::uint64_t master, std::uint64_t k) {
    return RandomStream(replica_seed(master, k));
  }

  std::uint64_t seed() const noexcept { return seed_; }

  /// Uniform on [0, 1) with 53 random bits.
  double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

  double normal() { return normal_(engine_); }

  std::uint64_t poisson(double mean) {
    if (!(mean > 0.0)) return 0;
    std::poisson_distribution<std::uint64_t> dist(mean);
    return dist(engine_);
  }

  std::mt19937_64& engine() noexcept { return engine_; }

 private:
  std::mt19937_64 engine_;
  std::normal_distribution<double> normal_{0.0, 1.0};
  std::uint64_t seed_;
};

}  // namespace bfpp
