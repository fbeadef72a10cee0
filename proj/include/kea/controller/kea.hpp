#pragma once

#include <cstdint>
#include <functional>
#include <memory>
#include <vector>

#include "kea/agents/learner.hpp"
#include "kea/env/environment.hpp"
#include "kea/intrinsic/intrinsic_model.hpp"
#include "kea/replay/replay_buffer.hpp"

namespace kea {

struct SwitchConfig {
    double sigma = 1.0;

    void validate() const;
};

/// S iff r_int > sigma (strict), N otherwise. Throws ContractViolation for negative or non-finite r_int.
PolicyId select_policy(double r_int, const SwitchConfig& config);

/// Fraction of S decisions obtained by replaying a recorded intrinsic-reward trace through select_policy.
double usage_fraction(const std::vector<double>& r_int_trace, const SwitchConfig& config);

/// Latches agent_s's loss weight to 1 once a collected transition carries positive extrinsic reward.
void freeze_gate(Learner& agent_s, const Transition& fresh);

/// Number of updates due at 1-based collection step `step` for a rate of `per_32` updates per 32 steps.
/// Over any 32 consecutive steps exactly per_32 updates are due.
std::uint64_t updates_due(std::uint64_t step, int per_32);

struct KeaConfig {
    bool enabled = true;
    SwitchConfig switching;
    RewardScaling scaling;
    std::size_t batch_size = 64;
    std::size_t warmup_samples = 1024;
    int utd_agent = 32;
    int utd_intrinsic = 32;
    // Most recent transitions used per intrinsic-model update.
    std::size_t intrinsic_batch = 1;

    void validate() const;
};

struct CollectRecord {
    PolicyId policy = PolicyId::N;
    int action = 0;
    double reward_ext = 0.0;
    double reward_int = 0.0;
    double switch_score = 0.0;
    double entropy_n = 0.0;
    bool episode_end = false;
    double episode_return = 0.0;  // valid when episode_end
};

struct StepResult {
    CollectRecord collect;
    std::uint32_t ticks = 0;
    UpdateLosses losses_n_sum;  // A^N losses summed over this step's ticks
};

struct TickRecord {
    bool trained = false;
    std::vector<std::size_t> indices;
    UpdateLosses losses_n;
    UpdateLosses losses_s;
};

/**
 * Runs one agent pair (A^N, A^S) against one environment: per-step policy switching on the
 * latest collected intrinsic reward, a shared replay buffer, per-step intrinsic-model
 * training and scheduled agent updates on shared batches. With enabled = false only A^N
 * exists and the controller reduces to the plain novelty-augmented baseline.
 */
class KeaController {
public:
    using UpdateObserver = std::function<void(PolicyId, const TrainingBatch&)>;

    KeaController(std::unique_ptr<Environment> env, std::unique_ptr<Learner> agent_n, std::unique_ptr<Learner> agent_s,
                  std::unique_ptr<IntrinsicModel> intrinsic, ReplayBuffer buffer, KeaConfig config,
                  std::uint64_t seed);

    /// Collection half of one step: switch, act, store, score, train the intrinsic model, consult the freeze gate.
    CollectRecord collect_step();

    /// One shared-batch update of both agents. No-op (trained = false) before warmup.
    TickRecord train_tick();

    /// collect_step followed by the scheduled number of train_ticks.
    StepResult step();

    /// usage_s_count / step_count; throws ContractViolation before the first step.
    double usage_fraction() const;

    void set_update_observer(UpdateObserver observer) { observer_ = std::move(observer); }

    const Learner& agent_n() const { return *agent_n_; }
    const Learner* agent_s() const { return agent_s_.get(); }
    Learner& mutable_agent_n() { return *agent_n_; }
    const IntrinsicModel& intrinsic() const { return *intrinsic_; }
    const ReplayBuffer& buffer() const { return buffer_; }
    const Environment& env() const { return *env_; }
    const KeaConfig& config() const { return config_; }

    double last_switch_score() const { return last_score_; }
    std::uint64_t step_count() const { return step_count_; }
    std::uint64_t usage_s_count() const { return usage_s_count_; }
    std::uint64_t episode_count() const { return episode_count_; }
    std::uint64_t agent_update_count() const { return agent_updates_; }
    std::uint64_t intrinsic_update_count() const { return intrinsic_updates_; }
    bool warmed_up() const;

private:
    void begin_episode();

    std::unique_ptr<Environment> env_;
    std::unique_ptr<Learner> agent_n_;
    std::unique_ptr<Learner> agent_s_;
    std::unique_ptr<IntrinsicModel> intrinsic_;
    ReplayBuffer buffer_;
    KeaConfig config_;
    Rng env_rng_;
    Rng act_rng_;
    Rng sample_rng_;
    UpdateObserver observer_;

    std::vector<double> obs_;
    bool needs_reset_ = true;
    double episode_return_ = 0.0;
    double last_score_ = 0.0;
    std::uint64_t step_count_ = 0;
    std::uint64_t usage_s_count_ = 0;
    std::uint64_t episode_count_ = 0;
    std::uint64_t agent_updates_ = 0;
    std::uint64_t intrinsic_updates_ = 0;
    std::uint64_t post_warmup_steps_ = 0;
};

}  // namespace kea
