#pragma once

#include "kea/agents/learner.hpp"
#include "kea/tensor/adam.hpp"

namespace kea {

enum class QExplore { epsilon_greedy, epsilon_proportional, boltzmann };
enum class QTarget { dqn, sql };

struct QConfig {
    std::vector<int> hidden{256, 256};
    Activation activation = Activation::relu;
    QExplore explore = QExplore::epsilon_greedy;
    QTarget target = QTarget::dqn;
    double epsilon = 0.1;       // epsilon_greedy / epsilon_proportional only
    double temperature = 1.0;   // epsilon_proportional / boltzmann, and the sql soft maximum
    double gamma = 0.99;
    double tau = 0.005;
    double lr = 1e-3;

    void validate() const;
};

/// Presets: "dqn" (epsilon-greedy), "dqn_p" (Q-proportional epsilon step), "sql" (Boltzmann, soft target).
QConfig q_config_for_variant(const std::string& variant, QConfig base = {});

/// Behaviour distribution of the exploration rule over the given Q-values.
Vector q_action_probs(const Vector& q, const QConfig& config);

/**
 * Value-based learner: a single Q network with a Polyak target. dqn targets bootstrap
 * with max_a Q'(s', a); sql targets with temperature * logsumexp(Q'(s', .) / temperature).
 */
class QAgent final : public Learner {
public:
    QAgent(int obs_size, int action_count, QConfig config, std::uint64_t seed);

    std::string variant() const override;
    int obs_size() const override { return q_.input_size(); }
    int action_count() const override { return q_.output_size(); }

    int act(std::span<const double> obs, ActMode mode, Rng& rng) const override;
    Vector action_probs(std::span<const double> obs) const override;
    UpdateLosses update(const TrainingBatch& batch, const RewardScaling& scaling) override;
    std::uint64_t parameter_checksum() const override;

    Vector td_target(const TrainingBatch& batch, const RewardScaling& scaling) const;

    const QConfig& config() const { return config_; }
    const MlpParams& q() const { return q_; }
    const MlpParams& q_target() const { return q_target_; }
    void set_q(MlpParams q, MlpParams q_target);

private:
    QConfig config_;
    MlpParams q_;
    MlpParams q_target_;
    AdamState adam_;
};

}  // namespace kea
