#include "kea/agents/sac.hpp"

#include <cmath>

#include "kea/core/error.hpp"
#include "kea/tensor/categorical.hpp"

namespace kea {

void SacConfig::validate() const {
    require(alpha > 0.0, "sac: alpha must be positive");
    require(gamma > 0.0 && gamma < 1.0, "sac: gamma must lie in (0,1)");
    require(tau > 0.0 && tau < 1.0, "sac: tau must lie in (0,1)");
    require(lr_actor > 0.0 && lr_critic > 0.0, "sac: learning rates must be positive");
}

namespace {

std::vector<int> layers(int in, const std::vector<int>& hidden, int out) {
    std::vector<int> sizes{in};
    sizes.insert(sizes.end(), hidden.begin(), hidden.end());
    sizes.push_back(out);
    return sizes;
}

void check_finite(double value, const char* what) {
    if (!std::isfinite(value)) {
        throw NumericError(std::string("sac_update: non-finite ") + what + " loss");
    }
}

}  // namespace

double sac_critic_loss(const MlpParams& q, const Matrix& obs, const std::vector<int>& actions, const Vector& y,
                       MlpGrads* grads, Matrix* values_out) {
    const auto b = obs.cols();
    require(static_cast<Eigen::Index>(actions.size()) == b && y.size() == b, "sac_critic_loss: batch mismatch");
    MlpTape tape;
    const Matrix values = mlp_forward_batch(q, obs, grads != nullptr ? &tape : nullptr);
    Matrix out_grad = Matrix::Zero(values.rows(), b);
    double loss = 0.0;
    for (Eigen::Index i = 0; i < b; ++i) {
        const int a = actions[static_cast<std::size_t>(i)];
        const double err = values(a, i) - y(i);
        loss += err * err;
        out_grad(a, i) = 2.0 * err / static_cast<double>(b);
    }
    loss /= static_cast<double>(b);
    if (grads != nullptr) {
        *grads = mlp_backward_batch(q, tape, out_grad);
    }
    if (values_out != nullptr) {
        *values_out = values;
    }
    return loss;
}

double sac_actor_loss(const MlpParams& policy, const Matrix& obs, const Matrix& min_q, double alpha,
                      MlpGrads* grads) {
    const auto b = obs.cols();
    require(min_q.cols() == b && min_q.rows() == policy.output_size(), "sac_actor_loss: Q shape mismatch");
    MlpTape tape;
    const Matrix logits = mlp_forward_batch(policy, obs, grads != nullptr ? &tape : nullptr);
    Matrix probs;
    Matrix log_probs;
    softmax_columns(logits, probs, log_probs);
    // Per-action integrand f = alpha log pi - Q; dL/dlogit_j = pi_j (f_j - E_pi[f]).
    const Matrix f = alpha * log_probs - min_q;
    const Eigen::RowVectorXd expected = (probs.array() * f.array()).colwise().sum();
    const double loss = expected.sum() / static_cast<double>(b);
    if (grads != nullptr) {
        Matrix out_grad = probs.array() * (f.rowwise() - expected).array();
        out_grad /= static_cast<double>(b);
        *grads = mlp_backward_batch(policy, tape, out_grad);
    }
    return loss;
}

SacAgent::SacAgent(int obs_size, int action_count, SacConfig config, std::uint64_t seed) : config_(std::move(config)) {
    config_.validate();
    require(obs_size > 0 && action_count > 0, "sac: observation and action sizes must be positive");
    Rng policy_rng = make_rng(seed, 0x5AC0);
    Rng q1_rng = make_rng(seed, 0x5AC1);
    Rng q2_rng = make_rng(seed, 0x5AC2);
    const auto sizes = layers(obs_size, config_.hidden, action_count);
    policy_ = make_mlp(sizes, config_.activation, policy_rng);
    q1_ = make_mlp(sizes, config_.activation, q1_rng);
    q2_ = make_mlp(sizes, config_.activation, q2_rng);
    q1_target_ = q1_;
    q2_target_ = q2_;
    policy_adam_ = make_adam(policy_);
    q1_adam_ = make_adam(q1_);
    q2_adam_ = make_adam(q2_);
}

Vector SacAgent::action_probs(std::span<const double> obs) const {
    return categorical_from_logits(mlp_forward(policy_, obs)).probs;
}

int SacAgent::act(std::span<const double> obs, ActMode mode, Rng& rng) const {
    const Vector probs = action_probs(obs);
    return mode == ActMode::greedy ? argmax(probs) : sample_index(probs, rng);
}

Vector SacAgent::soft_target(const TrainingBatch& batch, const RewardScaling& scaling) const {
    batch.validate(obs_size(), action_count());
    scaling.validate();
    const Matrix logits = mlp_forward_batch(policy_, batch.next_obs);
    Matrix probs;
    Matrix log_probs;
    softmax_columns(logits, probs, log_probs);
    const Matrix min_q = mlp_forward_batch(q1_target_, batch.next_obs).cwiseMin(mlp_forward_batch(q2_target_, batch.next_obs));
    const Eigen::RowVectorXd soft_value =
        (probs.array() * (min_q - config_.alpha * log_probs).array()).colwise().sum();
    Vector y = scaling.beta_ext * batch.reward_ext + scaling.beta_int * batch.reward_int;
    y.array() += config_.gamma * batch.not_terminated.array() * soft_value.transpose().array();
    return y;
}

UpdateLosses SacAgent::update(const TrainingBatch& batch, const RewardScaling& scaling) {
    batch.validate(obs_size(), action_count());
    if (loss_weight_ == 0.0) {
        // Zero-weighted losses: nothing moves, including targets and optimizer moments.
        return {};
    }
    const Vector y = soft_target(batch, scaling);

    MlpGrads g1;
    MlpGrads g2;
    UpdateLosses losses;
    Matrix q1_values;
    Matrix q2_values;
    losses.critic1 = sac_critic_loss(q1_, batch.obs, batch.actions, y, &g1, &q1_values);
    losses.critic2 = sac_critic_loss(q2_, batch.obs, batch.actions, y, &g2, &q2_values);
    check_finite(losses.critic1, "critic1");
    check_finite(losses.critic2, "critic2");

    // The actor sees the critics as they were before this step's critic update.
    const Matrix min_q = q1_values.cwiseMin(q2_values);
    MlpGrads gp;
    losses.actor = sac_actor_loss(policy_, batch.obs, min_q, config_.alpha, &gp);
    check_finite(losses.actor, "actor");

    if (loss_weight_ != 1.0) {
        scale_grads(g1, loss_weight_);
        scale_grads(g2, loss_weight_);
        scale_grads(gp, loss_weight_);
    }
    adam_step(q1_, q1_adam_, g1, config_.lr_critic);
    adam_step(q2_, q2_adam_, g2, config_.lr_critic);
    adam_step(policy_, policy_adam_, gp, config_.lr_actor);
    polyak_update(q1_target_, q1_, config_.tau);
    polyak_update(q2_target_, q2_, config_.tau);
    update_count_ += 1;

    losses.critic1 *= loss_weight_;
    losses.critic2 *= loss_weight_;
    losses.actor *= loss_weight_;
    return losses;
}

std::uint64_t SacAgent::parameter_checksum() const {
    std::uint64_t h = 0;
    for (const MlpParams* p : {&policy_, &q1_, &q2_, &q1_target_, &q2_target_}) {
        h = h * 1099511628211ULL ^ checksum(*p);
    }
    return h;
}

void SacAgent::set_policy(MlpParams policy) {
    require_same_shape(policy, policy_, "sac set_policy");
    policy_ = std::move(policy);
    policy_adam_ = make_adam(policy_);
}

void SacAgent::set_critics(MlpParams q1, MlpParams q2, MlpParams q1_target, MlpParams q2_target) {
    require_same_shape(q1, q1_, "sac set_critics");
    require_same_shape(q2, q2_, "sac set_critics");
    require_same_shape(q1_target, q1_, "sac set_critics");
    require_same_shape(q2_target, q2_, "sac set_critics");
    q1_ = std::move(q1);
    q2_ = std::move(q2);
    q1_target_ = std::move(q1_target);
    q2_target_ = std::move(q2_target);
    q1_adam_ = make_adam(q1_);
    q2_adam_ = make_adam(q2_);
}

}  // namespace kea
