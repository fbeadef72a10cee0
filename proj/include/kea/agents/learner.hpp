#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "kea/core/rng.hpp"
#include "kea/replay/recompute.hpp"
#include "kea/tensor/mlp.hpp"

namespace kea {

// Bellman-target reward weights: r = beta_ext * r_ext + beta_int * r_int.
struct RewardScaling {
    double beta_ext = 1.0;
    double beta_int = 1.0;

    void validate() const;
};

/// Columnar view of a sampled batch with recomputed intrinsic rewards.
struct TrainingBatch {
    Matrix obs;       // obs_size x B
    Matrix next_obs;  // obs_size x B
    std::vector<int> actions;
    Vector reward_ext;
    Vector reward_int;  // must have B entries
    Vector not_terminated;  // 0 for terminated transitions; truncated ones bootstrap

    std::size_t size() const { return actions.size(); }
    void validate(int obs_size, int action_count) const;
};

TrainingBatch make_batch(const std::vector<ScoredTransition>& scored);

/// Copy of batch with every intrinsic reward replaced by zero.
TrainingBatch without_intrinsic(const TrainingBatch& batch);

enum class ActMode { sample, greedy };

struct UpdateLosses {
    double critic1 = 0.0;
    double critic2 = 0.0;
    double actor = 0.0;
};

/**
 * Off-policy learner behind the KEA controller. loss_weight multiplies every loss; at 0
 * the learner is frozen and update() leaves all parameters and optimizer state untouched.
 */
class Learner {
public:
    virtual ~Learner() = default;

    virtual std::string variant() const = 0;
    virtual int obs_size() const = 0;
    virtual int action_count() const = 0;

    virtual int act(std::span<const double> obs, ActMode mode, Rng& rng) const = 0;
    /// Behaviour distribution over actions in sample mode.
    virtual Vector action_probs(std::span<const double> obs) const = 0;
    virtual UpdateLosses update(const TrainingBatch& batch, const RewardScaling& scaling) = 0;
    /// Hash over every trainable and target parameter.
    virtual std::uint64_t parameter_checksum() const = 0;

    double policy_entropy(std::span<const double> obs) const;

    double loss_weight() const { return loss_weight_; }
    void set_loss_weight(double w);
    std::uint64_t update_count() const { return update_count_; }

protected:
    double loss_weight_ = 1.0;
    std::uint64_t update_count_ = 0;
};

}  // namespace kea
