#pragma once

#include <cstdint>

namespace kea {

// Welford accumulator. variance() is the population form m2 / count.
struct RunningStats {
    std::uint64_t count = 0;
    double mean = 0.0;
    double m2 = 0.0;

    void update(double x);
    double variance() const;
    double stddev() const;

    /// Chan et al. parallel combination; equals the stats of the concatenated streams.
    static RunningStats merge(const RunningStats& a, const RunningStats& b);
};

inline constexpr double kStdFloor = 1e-8;

/// x / max(std, 1e-8). Identity while the stats are empty. No mean-centering.
double normalize(const RunningStats& stats, double x);

}  // namespace kea
