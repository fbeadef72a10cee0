#pragma once

#include <cstdint>
#include <vector>

#include "kea/core/rng.hpp"

namespace kea {

enum class PolicyId : std::uint8_t { N = 0, S = 1 };

// One environment step. Intrinsic rewards are never stored; they are recomputed at sampling time.
struct Transition {
    std::vector<double> obs;
    int action = 0;
    double reward_ext = 0.0;
    std::vector<double> next_obs;
    bool terminated = false;
    bool truncated = false;
    PolicyId behavior_policy = PolicyId::N;
    // next_obs was seen for the first time in its episode (episodic gate of the novelty-difference bonus).
    bool first_visit = true;
};

class ReplayBuffer {
public:
    /// obs_size fixes the accepted observation length; 0 accepts any length consistent with the first push.
    explicit ReplayBuffer(std::size_t capacity, int obs_size = 0);

    /// Appends t, evicting the oldest entry at capacity. Throws ContractViolation on malformed input.
    void push(Transition t);

    /// batch_size uniform draws with replacement. Throws std::runtime_error("buffer empty") when empty.
    std::vector<Transition> sample(std::size_t batch_size, Rng& rng) const;

    /// Draws only the storage indices; used when several consumers must see the same batch.
    std::vector<std::size_t> sample_indices(std::size_t batch_size, Rng& rng) const;

    const Transition& at(std::size_t index) const { return storage_.at(index); }
    /// i-th most recent transition, 0 = newest.
    const Transition& recent(std::size_t i) const;

    std::size_t size() const { return storage_.size(); }
    std::size_t capacity() const { return capacity_; }
    std::uint64_t insert_count() const { return insert_count_; }
    bool empty() const { return storage_.empty(); }

private:
    std::size_t capacity_;
    int obs_size_;
    std::vector<Transition> storage_;
    std::size_t head_ = 0;  // next slot to overwrite once full
    std::uint64_t insert_count_ = 0;
};

}  // namespace kea
