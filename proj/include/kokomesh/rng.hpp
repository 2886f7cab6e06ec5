#pragma once

#include <cmath>
#include <cstdint>
#include <random>

namespace koko {

// Deterministic generator with platform-independent double draws.
// mt19937_64 output is fixed by the standard; the u64 -> [0,1) mapping
// below avoids uniform_real_distribution, whose output is
// implementation-defined.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : eng_(seed) {}

    std::uint64_t nextU64() { return eng_(); }

    double uniform01() { return static_cast<double>(nextU64() >> 11) * 0x1.0p-53; }

    double uniform(double a, double b) { return a + (b - a) * uniform01(); }

    // uniform over [a,b] excluding a small neighbourhood of zero
    double nonzero(double a = -3.0, double b = 3.0, double exclusion = 1e-3) {
        for (;;) {
            double v = uniform(a, b);
            if (std::abs(v) >= exclusion) return v;
        }
    }

    bool coin() { return (nextU64() & 1u) != 0; }

    int pickIndex(int n) { return static_cast<int>(nextU64() % static_cast<std::uint64_t>(n)); }

private:
    std::mt19937_64 eng_;
};

} // namespace koko
