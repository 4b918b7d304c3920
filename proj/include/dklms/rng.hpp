#pragma once

#include <cmath>
#include <cstdint>
#include <random>
#include <string_view>

namespace dklms::rng {

// The one PRNG algorithm this project ships. Config files must name it
// explicitly so the byte-level meaning of a seed is pinned down:
// std::mt19937_64 raw 64-bit output, uniforms from the top 53 bits,
// Gaussians via the Marsaglia polar method (pairs cached).
inline constexpr std::string_view kAlgorithmName = "mt19937_64-polar";

// splitmix64 finalizer; used only for seed derivation, never for sampling.
inline std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9E3779B97F4A7C15ull;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ull;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBull;
  return x ^ (x >> 31);
}

// Independent sub-streams are addressed by (tag, index) pairs mixed into the
// master seed; the double application keeps tag and index from cancelling.
enum class StreamTag : std::uint64_t {
  kNodeParams = 0x01,
  kTrialData = 0x02,
  kComparatorReplica = 0x03,
  kTopology = 0x04,
  kGroundTruth = 0x05,
};

inline std::uint64_t derive_seed(std::uint64_t master, StreamTag tag,
                                 std::uint64_t index) {
  return splitmix64(splitmix64(master ^ static_cast<std::uint64_t>(tag)) + index);
}

class Generator {
 public:
  explicit Generator(std::uint64_t seed) : engine_(seed) {}

  std::uint64_t next_u64() { return engine_(); }

  // Uniform on [0, 1) with 53-bit resolution.
  double uniform() {
    return static_cast<double>(engine_() >> 11) * 0x1.0p-53;
  }

  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

  // Standard normal via the polar method; consumes uniforms in pairs and
  // caches the spare so the draw sequence is a pure function of the seed.
  double gaussian() {
    if (has_spare_) {
      has_spare_ = false;
      return spare_;
    }
    double u, v, s;
    do {
      u = 2.0 * uniform() - 1.0;
      v = 2.0 * uniform() - 1.0;
      s = u * u + v * v;
    } while (s >= 1.0 || s == 0.0);
    const double m = std::sqrt(-2.0 * std::log(s) / s);
    spare_ = v * m;
    has_spare_ = true;
    return u * m;
  }

  double gaussian(double mean, double stddev) {
    return mean + stddev * gaussian();
  }

 private:
  std::mt19937_64 engine_;
  double spare_ = 0.0;
  bool has_spare_ = false;
};

}  // namespace dklms::rng
