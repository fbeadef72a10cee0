#include "kea/agents/learner.hpp"

#include <cmath>

#include "kea/core/error.hpp"

namespace kea {

void RewardScaling::validate() const {
    require(std::isfinite(beta_ext) && beta_ext >= 0.0, "reward scaling: beta_ext must be finite and >= 0");
    require(std::isfinite(beta_int) && beta_int >= 0.0, "reward scaling: beta_int must be finite and >= 0");
}

void TrainingBatch::validate(int obs_size, int action_count) const {
    const auto b = static_cast<Eigen::Index>(actions.size());
    require(b > 0, "training batch is empty");
    require(obs.rows() == obs_size && next_obs.rows() == obs_size, "training batch: observation size mismatch");
    require(obs.cols() == b && next_obs.cols() == b && reward_ext.size() == b && not_terminated.size() == b,
            "training batch: column count mismatch");
    require(reward_int.size() == b, "training batch: missing intrinsic rewards");
    for (int a : actions) {
        require(a >= 0 && a < action_count, "training batch: action out of range");
    }
}

TrainingBatch make_batch(const std::vector<ScoredTransition>& scored) {
    require(!scored.empty(), "make_batch: empty batch");
    const auto b = static_cast<Eigen::Index>(scored.size());
    const auto n = static_cast<Eigen::Index>(scored.front().transition->obs.size());
    TrainingBatch batch;
    batch.obs.resize(n, b);
    batch.next_obs.resize(n, b);
    batch.reward_ext.resize(b);
    batch.reward_int.resize(b);
    batch.not_terminated.resize(b);
    batch.actions.resize(scored.size());
    for (Eigen::Index i = 0; i < b; ++i) {
        const Transition& t = *scored[static_cast<std::size_t>(i)].transition;
        require(static_cast<Eigen::Index>(t.obs.size()) == n && static_cast<Eigen::Index>(t.next_obs.size()) == n,
                "make_batch: observation size mismatch");
        batch.obs.col(i) = Eigen::Map<const Vector>(t.obs.data(), n);
        batch.next_obs.col(i) = Eigen::Map<const Vector>(t.next_obs.data(), n);
        batch.actions[static_cast<std::size_t>(i)] = t.action;
        batch.reward_ext(i) = t.reward_ext;
        batch.reward_int(i) = scored[static_cast<std::size_t>(i)].reward_int;
        batch.not_terminated(i) = t.terminated ? 0.0 : 1.0;
    }
    return batch;
}

TrainingBatch without_intrinsic(const TrainingBatch& batch) {
    TrainingBatch out = batch;
    out.reward_int.setZero();
    return out;
}

double Learner::policy_entropy(std::span<const double> obs) const {
    const Vector p = action_probs(obs);
    double h = 0.0;
    for (Eigen::Index i = 0; i < p.size(); ++i) {
        if (p(i) > 0.0) h -= p(i) * std::log(p(i));
    }
    return h;
}

void Learner::set_loss_weight(double w) {
    require(w == 0.0 || w == 1.0, "loss_weight must be 0 or 1");
    loss_weight_ = w;
}

}  // namespace kea
