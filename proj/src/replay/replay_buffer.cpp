#include "kea/replay/replay_buffer.hpp"

#include <cmath>
#include <stdexcept>

#include "kea/core/error.hpp"

namespace kea {

ReplayBuffer::ReplayBuffer(std::size_t capacity, int obs_size) : capacity_(capacity), obs_size_(obs_size) {
    require(capacity > 0, "replay buffer capacity must be positive");
    require(obs_size >= 0, "replay buffer observation size must be nonnegative");
}

void ReplayBuffer::push(Transition t) {
    if (obs_size_ == 0 && !t.obs.empty()) {
        obs_size_ = static_cast<int>(t.obs.size());
    }
    require(static_cast<int>(t.obs.size()) == obs_size_ && static_cast<int>(t.next_obs.size()) == obs_size_,
            "replay push: observation length does not match the buffer's observation size");
    require(std::isfinite(t.reward_ext), "replay push: non-finite extrinsic reward");
    require(t.action >= 0, "replay push: negative action");
    require(!(t.terminated && t.truncated), "replay push: terminated and truncated both set");
    if (storage_.size() < capacity_) {
        storage_.push_back(std::move(t));
    } else {
        storage_[head_] = std::move(t);
        head_ = (head_ + 1) % capacity_;
    }
    insert_count_ += 1;
}

std::vector<std::size_t> ReplayBuffer::sample_indices(std::size_t batch_size, Rng& rng) const {
    if (storage_.empty()) {
        throw std::runtime_error("buffer empty");
    }
    require(batch_size > 0, "replay sample: batch size must be positive");
    std::vector<std::size_t> indices(batch_size);
    for (auto& i : indices) {
        i = uniform_index(rng, storage_.size());
    }
    return indices;
}

std::vector<Transition> ReplayBuffer::sample(std::size_t batch_size, Rng& rng) const {
    std::vector<Transition> batch;
    batch.reserve(batch_size);
    for (std::size_t i : sample_indices(batch_size, rng)) {
        batch.push_back(storage_[i]);
    }
    return batch;
}

const Transition& ReplayBuffer::recent(std::size_t i) const {
    require(i < storage_.size(), "replay recent: index beyond buffer size");
    const std::size_t newest = storage_.size() < capacity_ ? storage_.size() - 1 : (head_ + capacity_ - 1) % capacity_;
    return storage_[(newest + capacity_ - i) % capacity_];
}

}  // namespace kea
