#pragma once

#include <cstdint>

namespace cascade_pricer {

/**
 * Deterministic uniform [0,1) source addressed by (trial, node, event).
 * A pure function of the master seed and the address: trials replay
 * identically regardless of evaluation order or thread count, and two
 * strategies evaluated against the same tape share their randomness.
 *
 * ICM consumes one value per received recommendation (event 0,1,2,... in
 * arrival order); LTM reads the node's threshold from event 0; the
 * cashback-recipient draw uses the reserved event below.
 */
class ThresholdTape {
 public:
  explicit ThresholdTape(std::uint64_t master_seed) : seed_(master_seed) {}

  static constexpr std::uint64_t kCashbackEvent = ~std::uint64_t{0};

  double uniform(std::uint64_t trial, std::uint64_t node, std::uint64_t event) const {
    std::uint64_t h = mix(seed_ ^ 0x2545f4914f6cdd1dULL);
    h = mix(h ^ (trial + 0x9e3779b97f4a7c15ULL));
    h = mix(h ^ (node + 0xd1b54a32d192ed03ULL));
    h = mix(h ^ (event + 0x8cb92ba72f3d8dd7ULL));
    return static_cast<double>(h >> 11) * 0x1.0p-53;
  }

  std::uint64_t master_seed() const { return seed_; }

 private:
  // splitmix64 finalizer
  static std::uint64_t mix(std::uint64_t z) {
    z += 0x9e3779b97f4a7c15ULL;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  }

  std::uint64_t seed_;
};

}  // namespace cascade_pricer
