#pragma once

#include <cstdint>
#include <random>

namespace pairlearn {

/// Seeded generator with platform-independent variate transforms.
///
/// std::mt19937_64 is fully specified by the standard, but the std::*_distribution
/// algorithms are not, so the transforms are spelled out here to keep every
/// experiment bit-reproducible across standard libraries.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : engine_(seed) {}

    /// Uniform on [0, 1) with 53 random bits.
    double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }
    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }
    /// Uniform integer in [0, n).
    std::uint64_t index(std::uint64_t n);
    /// Standard normal (Box-Muller, one variate per call).
    double normal();
    /// Standard Cauchy via the inverse CDF.
    double cauchy();

private:
    std::mt19937_64 engine_;
};

/// Seed for an independent stream, mixed from a base seed and a stream index.
std::uint64_t derive_seed(std::uint64_t base, std::uint64_t stream);

}  // namespace pairlearn
