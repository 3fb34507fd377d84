#include "momgan/rng.hpp"

#include <cmath>

namespace momgan {

namespace {
constexpr std::uint64_t kgolden = 0x9E3779B97F4A7C15ULL;
constexpr double kTwoPi = 6.283185307179586476925286766559;
}  // namespace

std::uint64_t mix64(std::uint64_t x) {
  x ^= x >> 30;
  x *= 0xBF58476D1CE4E5B9ULL;
  x ^= x >> 27;
  x *= 0x94D049BB133111EBULL;
  x ^= x >> 31;
  return x;
}

Rng::Rng(std::uint64_t seed, std::uint64_t stream)
    : seed_(seed), stream_(stream) {
  state_ = mix64(mix64(seed + kgolden) ^ mix64(stream + 0x6A09E667F3BCC909ULL));
}

Rng Rng::split(std::uint64_t child) const {
  return Rng(seed_, mix64(stream_ + kgolden) ^ mix64(child + 1));
}

std::uint64_t Rng::next_u64() {
  state_ += kgolden;
  return mix64(state_);
}

double Rng::uniform() {
  // 53 bits, shifted off the endpoints.
  return (static_cast<double>(next_u64() >> 11) + 0.5) * 0x1.0p-53;
}

double Rng::uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

double Rng::normal(double mean, double stddev) {
  const double u1 = uniform();
  const double u2 = uniform();
  return mean + stddev * std::sqrt(-2.0 * std::log(u1)) * std::cos(kTwoPi * u2);
}

std::uint64_t Rng::below(std::uint64_t n) {
  // Rejection sampling over the largest multiple of n.
  const std::uint64_t threshold = (0 - n) % n;
  for (;;) {
    const std::uint64_t r = next_u64();
    if (r >= threshold) return r % n;
  }
}

}  // namespace momgan
