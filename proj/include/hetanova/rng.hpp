#pragma once

#include <cmath>
#include <cstdint>
#include <initializer_list>

namespace hetanova {

// Splittable counter-style RNG. Every independent unit of work (bootstrap
// replicate, simulation replicate, Monte Carlo chunk) gets its own stream
// derived from (seed, tags...), so results do not depend on thread count or
// execution order. The generator is the SplittableRandom construction:
// a Weyl sequence passed through a strong 64-bit mixer.
namespace rng {

inline constexpr std::uint64_t kGolden = 0x9E3779B97F4A7C15ULL;

// Stafford variant 13 of the MurmurHash3 finalizer.
inline std::uint64_t mix64(std::uint64_t z) {
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

class Stream {
 public:
  explicit Stream(std::uint64_t state) : state_(state) {}

  std::uint64_t next_u64() {
    state_ += kGolden;
    return mix64(state_);
  }

  // Uniform on the open interval (0, 1); never returns 0 or 1, so logs are
  // always finite.
  double next_uniform() {
    return (static_cast<double>(next_u64() >> 11) + 0.5) * 0x1.0p-53;
  }

  // Standard normal via Box-Muller. Draws a full pair each call; the sine
  // partner is discarded so the stream position never depends on call
  // parity.
  double next_normal() {
    const double u1 = next_uniform();
    const double u2 = next_uniform();
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(6.283185307179586476925286766559 * u2);
  }

  // Fills dst[0..count) with mean + sd * N(0,1), consuming Box-Muller pairs.
  void fill_normals(double* dst, int count, double mean, double sd) {
    int k = 0;
    while (k + 1 < count) {
      const double u1 = next_uniform();
      const double u2 = next_uniform();
      const double r = std::sqrt(-2.0 * std::log(u1));
      const double t = 6.283185307179586476925286766559 * u2;
      dst[k++] = mean + sd * (r * std::cos(t));
      dst[k++] = mean + sd * (r * std::sin(t));
    }
    if (k < count) dst[k] = mean + sd * next_normal();
  }

  // Gamma(shape, 1) via Marsaglia-Tsang; boosts shape < 1 with the standard
  // U^{1/shape} trick. Rejection loops consume the stream sequentially, so
  // draws stay deterministic per stream.
  double next_gamma(double shape) {
    if (shape < 1.0) {
      const double u = next_uniform();
      return next_gamma(shape + 1.0) * std::pow(u, 1.0 / shape);
    }
    const double d = shape - 1.0 / 3.0;
    const double c = 1.0 / std::sqrt(9.0 * d);
    for (;;) {
      double x, v;
      do {
        x = next_normal();
        v = 1.0 + c * x;
      } while (v <= 0.0);
      v = v * v * v;
      const double u = next_uniform();
      if (u < 1.0 - 0.0331 * x * x * x * x) return d * v;
      if (std::log(u) < 0.5 * x * x + d * (1.0 - v + std::log(v))) return d * v;
    }
  }

 private:
  std::uint64_t state_;
};

// Derives a stream state by folding the seed and an arbitrary tag list
// through the mixer. Identical (seed, tags) always name the same stream.
inline Stream derive_stream(std::uint64_t seed, std::initializer_list<std::uint64_t> tags) {
  std::uint64_t h = mix64(seed + kGolden);
  for (std::uint64_t t : tags) h = mix64(h ^ (t + kGolden));
  return Stream(h);
}

inline Stream derive_stream(std::uint64_t seed, std::uint64_t t0) { return derive_stream(seed, {t0}); }
inline Stream derive_stream(std::uint64_t seed, std::uint64_t t0, std::uint64_t t1) {
  return derive_stream(seed, {t0, t1});
}
inline Stream derive_stream(std::uint64_t seed, std::uint64_t t0, std::uint64_t t1, std::uint64_t t2) {
  return derive_stream(seed, {t0, t1, t2});
}

// Stream purpose tags. Distinct constants keep unrelated consumers of the
// same user seed on disjoint streams.
inline constexpr std::uint64_t kTagBootstrap = 0xB007ULL;
inline constexpr std::uint64_t kTagDataGen = 0xDA7AULL;
inline constexpr std::uint64_t kTagEquicoordinate = 0xEC0DULL;
inline constexpr std::uint64_t kTagInnerBootstrap = 0x1BB7ULL;

}  // namespace rng
}  // namespace hetanova
