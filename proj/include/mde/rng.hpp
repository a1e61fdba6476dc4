#pragma once

#include <cmath>
#include <cstdint>
#include <random>
#include <stdexcept>

namespace mde {

/// Deterministic random stream with splittable substreams.
///
/// All stochastic code in the library draws through this class.  The uniform
/// and normal generators are implemented explicitly (rather than through
/// std::*_distribution, whose output sequences are implementation-defined) so
/// that a given seed reproduces the same draws on any platform.
///
/// substream(id) derives an independent child stream from the seed this
/// stream was constructed with (not from its current position), so parallel
/// workers can be handed decorrelated streams whose output does not depend on
/// scheduling or on how much the parent has already consumed.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed), seed_(seed) {}

  std::uint64_t seed() const { return seed_; }

  /// Uniform double in [0, 1), 53 random bits.
  double uniform() {
    return static_cast<double>(engine_() >> 11) * 0x1.0p-53;
  }

  /// Standard normal deviate (Box-Muller, pairs cached).
  double normal() {
    if (has_spare_) {
      has_spare_ = false;
      return spare_;
    }
    // 1 - U keeps the argument of log strictly positive.
    const double radius = std::sqrt(-2.0 * std::log(1.0 - uniform()));
    const double angle = 2.0 * 3.14159265358979323846 * uniform();
    spare_ = radius * std::sin(angle);
    has_spare_ = true;
    return radius * std::cos(angle);
  }

  /// Uniform index in {0, ..., n-1}.
  std::size_t uniform_index(std::size_t n) {
    if (n == 0) throw std::invalid_argument("uniform_index: n must be positive");
    return static_cast<std::size_t>(uniform() * static_cast<double>(n)) % n;
  }

  /// Independent child stream; distinct ids give decorrelated children.
  Rng substream(std::uint64_t id) const {
    return Rng(mix(seed_ ^ mix(id + 0x632be59bd9b4e019ULL)));
  }

 private:
  // splitmix64 finalizer: a cheap, well-distributed 64-bit mixer.
  static std::uint64_t mix(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
  }

  std::mt19937_64 engine_;
  std::uint64_t seed_;
  bool has_spare_ = false;
  double spare_ = 0.0;
};

}  // namespace mde
