#pragma once

#include <cstdint>

namespace expando {

/// SplitMix64 (Steele/Lea/Vigna). Pinned by algorithm, not by library, so
/// seeded streams are bit-identical across platforms and implementations:
///   state += 0x9E3779B97F4A7C15
///   z = state; z ^= z >> 30; z *= 0xBF58476D1CE4E5B9
///   z ^= z >> 27; z *= 0x94D049BB133111EB; return z ^ (z >> 31)
class SplitMix64 {
  public:
    explicit SplitMix64(std::uint64_t seed) : state_(seed) {}

    std::uint64_t next_u64() {
        std::uint64_t z = (state_ += 0x9e3779b97f4a7c15ULL);
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
        return z ^ (z >> 31);
    }

    /// Uniform in [0, 1) with 53 mantissa bits.
    double next_double() {
        return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
    }

  private:
    std::uint64_t state_;
};

} // namespace expando
