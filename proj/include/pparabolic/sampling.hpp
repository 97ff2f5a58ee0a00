#pragma once

#include <cstdint>
#include <random>

namespace pparabolic {

/// Seeded uniform generator with a platform-independent mapping to [0, 1).
/// std::uniform_real_distribution is implementation-defined, so artifacts
/// produced from it would not be byte-stable across standard libraries.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : engine_(seed) {}

    double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }
    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }
    std::uint64_t next() { return engine_(); }

private:
    std::mt19937_64 engine_;
};

/// Radical inverse of `index` in the given prime base (van der Corput).
inline double radical_inverse(std::uint64_t index, unsigned base) {
    double inv_base = 1.0 / base;
    double factor = inv_base;
    double result = 0.0;
    while (index > 0) {
        result += static_cast<double>(index % base) * factor;
        index /= base;
        factor *= inv_base;
    }
    return result;
}

/// Halton low-discrepancy sequence in up to four dimensions.
class HaltonSequence {
public:
    explicit HaltonSequence(std::uint64_t start = 1) : index_(start) {}

    /// Coordinate `dim` of the current point.
    double coordinate(int dim) const {
        static constexpr unsigned bases[] = {2, 3, 5, 7};
        return radical_inverse(index_, bases[dim]);
    }
    void advance() { ++index_; }
    std::uint64_t index() const { return index_; }

private:
    std::uint64_t index_;
};

} // namespace pparabolic
