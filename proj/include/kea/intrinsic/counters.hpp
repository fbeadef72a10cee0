#pragma once

#include <cstdint>
#include <map>
#include <span>
#include <vector>

namespace kea {

// Per-episode visit counts keyed on the exact observation vector.
class EpisodicCounter {
public:
    /// Increments and returns the count of obs.
    std::uint32_t visit(std::span<const double> obs);
    std::uint32_t count(std::span<const double> obs) const;
    void reset() { counts_.clear(); }
    bool empty() const { return counts_.empty(); }
    std::size_t distinct() const { return counts_.size(); }

private:
    std::map<std::vector<double>, std::uint32_t> counts_;
};

// Lifetime visit counts N(s).
class VisitCounter {
public:
    std::uint64_t visit(std::span<const double> state);
    std::uint64_t count(std::span<const double> state) const;

private:
    std::map<std::vector<double>, std::uint64_t> counts_;
};

/// Increments N(next_state) and returns 1 / N(next_state).
double count_reward(VisitCounter& counter, std::span<const double> next_state);

}  // namespace kea
