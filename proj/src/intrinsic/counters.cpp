#include "kea/intrinsic/counters.hpp"

namespace kea {

namespace {

std::vector<double> key(std::span<const double> obs) { return {obs.begin(), obs.end()}; }

}  // namespace

std::uint32_t EpisodicCounter::visit(std::span<const double> obs) { return ++counts_[key(obs)]; }

std::uint32_t EpisodicCounter::count(std::span<const double> obs) const {
    const auto it = counts_.find(key(obs));
    return it == counts_.end() ? 0 : it->second;
}

std::uint64_t VisitCounter::visit(std::span<const double> state) { return ++counts_[key(state)]; }

std::uint64_t VisitCounter::count(std::span<const double> state) const {
    const auto it = counts_.find(key(state));
    return it == counts_.end() ? 0 : it->second;
}

double count_reward(VisitCounter& counter, std::span<const double> next_state) {
    return 1.0 / static_cast<double>(counter.visit(next_state));
}

}  // namespace kea
