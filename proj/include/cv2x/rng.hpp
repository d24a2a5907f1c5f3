#pragma once

#include <cmath>
#include <cstdint>
#include <random>

namespace cv2x {

/// Subsystem tags for random substreams.
enum class StreamTag : std::uint64_t {
  Placement = 1,
  Arrivals = 2,
  Scheduling = 3,
  Fading = 4,
};

/// SplitMix64 finalizer. Used to derive stream seeds and counter-based draws.
constexpr std::uint64_t mix64(std::uint64_t z) {
  z += 0x9e3779b97f4a7c15ULL;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

/// Hashes an ordered key tuple into a single 64-bit value.
constexpr std::uint64_t hash_key(std::uint64_t a, std::uint64_t b) { return mix64(a ^ mix64(b)); }

constexpr std::uint64_t hash_key(std::uint64_t a, std::uint64_t b, std::uint64_t c) {
  return hash_key(hash_key(a, b), c);
}

constexpr std::uint64_t hash_key(std::uint64_t a, std::uint64_t b, std::uint64_t c,
                                 std::uint64_t d) {
  return hash_key(hash_key(a, b, c), d);
}

/// Maps 64 random bits to a double in [0, 1) using the top 53 bits.
constexpr double to_unit(std::uint64_t bits) {
  return static_cast<double>(bits >> 11) * 0x1.0p-53;
}

/// A random stream whose seed is a pure function of (run seed, owner, tag).
///
/// The engine is std::mt19937_64, whose output sequence is fixed by the
/// standard. Distribution mapping is done here rather than through <random>
/// distributions so that draws are identical across standard libraries.
class RandomStream {
 public:
  RandomStream() : RandomStream(0, 0, StreamTag::Placement) {}
  RandomStream(std::uint64_t run_seed, std::uint64_t owner, StreamTag tag)
      : engine_(hash_key(run_seed, owner, static_cast<std::uint64_t>(tag))) {}

  std::uint64_t next_bits() { return engine_(); }

  /// Uniform on [0, 1).
  double uniform() { return to_unit(engine_()); }

  /// Uniform on [lo, hi).
  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

  /// Uniform integer on [0, bound). Lemire's multiply-and-reject method.
  std::uint64_t below(std::uint64_t bound) {
    if (bound <= 1) return 0;
    std::uint64_t x = engine_();
    __uint128_t m = static_cast<__uint128_t>(x) * bound;
    auto low = static_cast<std::uint64_t>(m);
    if (low < bound) {
      const std::uint64_t threshold = (0 - bound) % bound;
      while (low < threshold) {
        x = engine_();
        m = static_cast<__uint128_t>(x) * bound;
        low = static_cast<std::uint64_t>(m);
      }
    }
    return static_cast<std::uint64_t>(m >> 64);
  }

  bool bernoulli(double p) { return uniform() < p; }

 private:
  std::mt19937_64 engine_;
};

/// Counter-based unit-mean exponential draw keyed by (seed, tx, rx, slot).
/// Order of evaluation never affects the value.
inline double exponential_at(std::uint64_t run_seed, std::uint64_t tx, std::uint64_t rx,
                             std::uint64_t slot) {
  const double u = to_unit(hash_key(hash_key(run_seed, static_cast<std::uint64_t>(StreamTag::Fading)),
                                    tx, rx, slot));
  return -std::log1p(-u);
}

}  // namespace cv2x
