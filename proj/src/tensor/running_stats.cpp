#include "kea/tensor/running_stats.hpp"

#include <algorithm>
#include <cmath>

#include "kea/core/error.hpp"

namespace kea {

void RunningStats::update(double x) {
    require(std::isfinite(x), "RunningStats::update: non-finite sample");
    count += 1;
    const double delta = x - mean;
    mean += delta / static_cast<double>(count);
    m2 += delta * (x - mean);
}

double RunningStats::variance() const {
    return count == 0 ? 0.0 : std::max(m2, 0.0) / static_cast<double>(count);
}

double RunningStats::stddev() const { return std::sqrt(variance()); }

RunningStats RunningStats::merge(const RunningStats& a, const RunningStats& b) {
    if (a.count == 0) return b;
    if (b.count == 0) return a;
    RunningStats out;
    out.count = a.count + b.count;
    const double na = static_cast<double>(a.count);
    const double nb = static_cast<double>(b.count);
    const double n = static_cast<double>(out.count);
    const double delta = b.mean - a.mean;
    out.mean = a.mean + delta * nb / n;
    out.m2 = a.m2 + b.m2 + delta * delta * na * nb / n;
    return out;
}

double normalize(const RunningStats& stats, double x) {
    if (stats.count == 0) return x;
    return x / std::max(stats.stddev(), kStdFloor);
}

}  // namespace kea
