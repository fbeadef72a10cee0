#pragma once

#include "kea/agents/learner.hpp"
#include "kea/tensor/adam.hpp"

namespace kea {

struct SacConfig {
    std::vector<int> hidden{256, 256};
    Activation activation = Activation::relu;
    double alpha = 0.3;
    double gamma = 0.99;
    double tau = 0.005;
    double lr_actor = 3e-4;
    double lr_critic = 1e-3;

    void validate() const;
};

/// Critic MSE to targets y on the taken actions; grads (optional) receive dLoss/dq_params and
/// values (optional) the per-action Q matrix of the forward pass.
double sac_critic_loss(const MlpParams& q, const Matrix& obs, const std::vector<int>& actions, const Vector& y,
                       MlpGrads* grads, Matrix* values = nullptr);

/**
 * Discrete SAC actor loss: mean over the batch of sum_a pi(a|s) [alpha log pi(a|s) - min(Q1, Q2)(s, a)],
 * with min_q (actions x B) treated as a constant. grads (optional) receive dLoss/dpolicy_params.
 */
double sac_actor_loss(const MlpParams& policy, const Matrix& obs, const Matrix& min_q, double alpha,
                      MlpGrads* grads);

/**
 * Discrete-action soft actor-critic with twin critics and Polyak-averaged targets. The
 * soft Bellman target takes the expectation over next actions under the current policy,
 * and only terminated transitions drop the bootstrap term.
 */
class SacAgent final : public Learner {
public:
    SacAgent(int obs_size, int action_count, SacConfig config, std::uint64_t seed);

    std::string variant() const override { return "sac"; }
    int obs_size() const override { return policy_.input_size(); }
    int action_count() const override { return policy_.output_size(); }

    int act(std::span<const double> obs, ActMode mode, Rng& rng) const override;
    Vector action_probs(std::span<const double> obs) const override;
    UpdateLosses update(const TrainingBatch& batch, const RewardScaling& scaling) override;
    std::uint64_t parameter_checksum() const override;

    /// y = beta_ext r_ext + beta_int r_int + gamma (1 - terminated) sum_a' pi(a'|s') [min Q'(s', a') - alpha log pi(a'|s')].
    Vector soft_target(const TrainingBatch& batch, const RewardScaling& scaling) const;

    const SacConfig& config() const { return config_; }
    const MlpParams& policy() const { return policy_; }
    const MlpParams& q1() const { return q1_; }
    const MlpParams& q2() const { return q2_; }
    const MlpParams& q1_target() const { return q1_target_; }
    const MlpParams& q2_target() const { return q2_target_; }

    // Test and checkpoint hooks.
    void set_policy(MlpParams policy);
    void set_critics(MlpParams q1, MlpParams q2, MlpParams q1_target, MlpParams q2_target);

private:
    SacConfig config_;
    MlpParams policy_;
    MlpParams q1_;
    MlpParams q2_;
    MlpParams q1_target_;
    MlpParams q2_target_;
    AdamState policy_adam_;
    AdamState q1_adam_;
    AdamState q2_adam_;
};

}  // namespace kea
