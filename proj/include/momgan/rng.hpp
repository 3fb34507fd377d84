#pragma once

#include <cstdint>
#include <cstddef>
#include <vector>

namespace momgan {

// Counter-based pseudo-random generator with splittable streams.
// Two instances built from the same (seed, stream) produce identical
// sequences; distinct stream ids give statistically independent streams,
// so parallel workers can each own a split without coordination.
class Rng {
 public:
  explicit Rng(std::uint64_t seed, std::uint64_t stream = 0);

  std::uint64_t seed() const { return seed_; }
  std::uint64_t stream() const { return stream_; }

  // Derives an independent stream from this generator's identity.
  // Does not consume state; splitting is a pure function of (seed, stream, child).
  Rng split(std::uint64_t child) const;

  std::uint64_t next_u64();

  // Uniform on the open interval (0, 1); never returns an endpoint.
  double uniform();
  double uniform(double lo, double hi);

  // Standard Box-Muller draw; consumes exactly two uniforms.
  double normal(double mean = 0.0, double stddev = 1.0);

  // Unbiased integer in [0, n); n must be nonzero.
  std::uint64_t below(std::uint64_t n);

  // Fisher-Yates shuffle.
  template <typename T>
  void shuffle(std::vector<T>& items) {
    if (items.size() < 2) return;
    for (std::size_t i = items.size() - 1; i > 0; --i) {
      const std::size_t j = static_cast<std::size_t>(below(i + 1));
      std::swap(items[i], items[j]);
    }
  }

 private:
  std::uint64_t seed_;
  std::uint64_t stream_;
  std::uint64_t state_;
};

// SplitMix64 finalizer; used for stream derivation and state setup.
std::uint64_t mix64(std::uint64_t x);

}  // namespace momgan
