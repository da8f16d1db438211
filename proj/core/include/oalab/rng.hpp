#pragma once

#include <complex>
#include <cstdint>
#include <string_view>

namespace oalab {

/// Deterministic 64-bit stream based on the SplitMix64 generator
/// (Steele, Lea & Flood; the generator behind Java's SplittableRandom).
///
/// Streams are derived, not advanced: `derive(seed, a, b)` mixes the key
/// tuple through the SplitMix64 finalizer, so a stream for (seed, draw k,
/// device d) can be opened independently of every other stream. Sampling
/// code keys one stream per (draw index, device) pair, which makes results
/// independent of evaluation order and trivially reproducible.
class RandomStream {
  public:
    explicit RandomStream(std::uint64_t seed) : state_(seed) {}

    /// Open the sub-stream keyed by (seed, a, b).
    static RandomStream derive(std::uint64_t seed, std::uint64_t a, std::uint64_t b = 0);

    std::uint64_t next_u64();

    /// Uniform double in [0, 1), 53 random bits.
    double uniform();

    /// Standard normal via Box-Muller on two uniforms.
    double normal();

    /// Complex normal with independent N(0, 1) real and imaginary parts.
    std::complex<double> normal_complex();

  private:
    std::uint64_t state_;
};

/// FNV-1a hash of a string, used to key per-device RNG sub-streams so that
/// draws do not depend on registry ordering.
std::uint64_t fnv1a(std::string_view text);

}  // namespace oalab
