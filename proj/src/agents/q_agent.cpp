#include "kea/agents/q_agent.hpp"

#include <cmath>

#include "kea/agents/sac.hpp"
#include "kea/core/error.hpp"
#include "kea/tensor/categorical.hpp"

namespace kea {

void QConfig::validate() const {
    require(epsilon >= 0.0 && epsilon <= 1.0, "q agent: epsilon must lie in [0,1]");
    require(temperature > 0.0, "q agent: temperature must be positive");
    require(gamma > 0.0 && gamma < 1.0, "q agent: gamma must lie in (0,1)");
    require(tau > 0.0 && tau < 1.0, "q agent: tau must lie in (0,1)");
    require(lr > 0.0, "q agent: learning rate must be positive");
}

QConfig q_config_for_variant(const std::string& variant, QConfig base) {
    if (variant == "dqn") {
        base.explore = QExplore::epsilon_greedy;
        base.target = QTarget::dqn;
    } else if (variant == "dqn_p") {
        base.explore = QExplore::epsilon_proportional;
        base.target = QTarget::dqn;
    } else if (variant == "sql") {
        base.explore = QExplore::boltzmann;
        base.target = QTarget::sql;
    } else {
        throw ConfigError("agent.variant: '" + variant + "' is not a Q-learning variant");
    }
    return base;
}

Vector q_action_probs(const Vector& q, const QConfig& config) {
    const auto n = q.size();
    require(n > 0, "q_action_probs: no actions");
    const Vector greedy = Vector::Unit(n, argmax(q));
    switch (config.explore) {
        case QExplore::epsilon_greedy:
            return config.epsilon * Vector::Constant(n, 1.0 / static_cast<double>(n)) + (1.0 - config.epsilon) * greedy;
        case QExplore::epsilon_proportional:
            return config.epsilon * categorical_from_logits(Vector(q / config.temperature)).probs +
                   (1.0 - config.epsilon) * greedy;
        case QExplore::boltzmann:
            return categorical_from_logits(Vector(q / config.temperature)).probs;
    }
    return greedy;
}

QAgent::QAgent(int obs_size, int action_count, QConfig config, std::uint64_t seed) : config_(std::move(config)) {
    config_.validate();
    require(obs_size > 0 && action_count > 0, "q agent: observation and action sizes must be positive");
    std::vector<int> sizes{obs_size};
    sizes.insert(sizes.end(), config_.hidden.begin(), config_.hidden.end());
    sizes.push_back(action_count);
    Rng rng = make_rng(seed, 0x0A6E);
    q_ = make_mlp(sizes, config_.activation, rng);
    q_target_ = q_;
    adam_ = make_adam(q_);
}

std::string QAgent::variant() const {
    switch (config_.explore) {
        case QExplore::epsilon_greedy: return "dqn";
        case QExplore::epsilon_proportional: return "dqn_p";
        case QExplore::boltzmann: return "sql";
    }
    return "dqn";
}

Vector QAgent::action_probs(std::span<const double> obs) const { return q_action_probs(mlp_forward(q_, obs), config_); }

int QAgent::act(std::span<const double> obs, ActMode mode, Rng& rng) const {
    const Vector q = mlp_forward(q_, obs);
    if (mode == ActMode::greedy) return argmax(q);
    const auto n = static_cast<std::size_t>(q.size());
    switch (config_.explore) {
        case QExplore::epsilon_greedy:
            return uniform01(rng) < config_.epsilon ? static_cast<int>(uniform_index(rng, n)) : argmax(q);
        case QExplore::epsilon_proportional:
            if (uniform01(rng) < config_.epsilon) {
                return sample_index(categorical_from_logits(Vector(q / config_.temperature)).probs, rng);
            }
            return argmax(q);
        case QExplore::boltzmann:
            return sample_index(categorical_from_logits(Vector(q / config_.temperature)).probs, rng);
    }
    return argmax(q);
}

Vector QAgent::td_target(const TrainingBatch& batch, const RewardScaling& scaling) const {
    batch.validate(obs_size(), action_count());
    scaling.validate();
    const Matrix next_q = mlp_forward_batch(q_target_, batch.next_obs);
    Vector bootstrap(next_q.cols());
    for (Eigen::Index i = 0; i < next_q.cols(); ++i) {
        if (config_.target == QTarget::dqn) {
            bootstrap(i) = next_q.col(i).maxCoeff();
        } else {
            bootstrap(i) = config_.temperature * log_sum_exp(Vector(next_q.col(i) / config_.temperature));
        }
    }
    Vector y = scaling.beta_ext * batch.reward_ext + scaling.beta_int * batch.reward_int;
    y.array() += config_.gamma * batch.not_terminated.array() * bootstrap.array();
    return y;
}

UpdateLosses QAgent::update(const TrainingBatch& batch, const RewardScaling& scaling) {
    batch.validate(obs_size(), action_count());
    if (loss_weight_ == 0.0) return {};
    const Vector y = td_target(batch, scaling);
    MlpGrads grads;
    UpdateLosses losses;
    losses.critic1 = sac_critic_loss(q_, batch.obs, batch.actions, y, &grads);
    if (!std::isfinite(losses.critic1)) {
        throw NumericError("q_update: non-finite TD loss");
    }
    if (loss_weight_ != 1.0) scale_grads(grads, loss_weight_);
    adam_step(q_, adam_, grads, config_.lr);
    polyak_update(q_target_, q_, config_.tau);
    update_count_ += 1;
    losses.critic1 *= loss_weight_;
    return losses;
}

std::uint64_t QAgent::parameter_checksum() const { return checksum(q_) * 1099511628211ULL ^ checksum(q_target_); }

void QAgent::set_q(MlpParams q, MlpParams q_target) {
    require_same_shape(q, q_, "q agent set_q");
    require_same_shape(q_target, q_, "q agent set_q");
    q_ = std::move(q);
    q_target_ = std::move(q_target);
    adam_ = make_adam(q_);
}

}  // namespace kea
