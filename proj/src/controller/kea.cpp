#include "kea/controller/kea.hpp"

#include <algorithm>
#include <cmath>

#include "kea/core/error.hpp"
#include "kea/replay/recompute.hpp"

namespace kea {

void SwitchConfig::validate() const { require(std::isfinite(sigma) && sigma >= 0.0, "kea.sigma must be finite and >= 0"); }

PolicyId select_policy(double r_int, const SwitchConfig& config) {
    require(std::isfinite(r_int), "select_policy: intrinsic reward must be finite");
    require(r_int >= 0.0, "select_policy: intrinsic reward must be nonnegative");
    return r_int > config.sigma ? PolicyId::S : PolicyId::N;
}

double usage_fraction(const std::vector<double>& r_int_trace, const SwitchConfig& config) {
    require(!r_int_trace.empty(), "usage_fraction: empty trace");
    std::size_t s = 0;
    for (double r : r_int_trace) {
        if (select_policy(r, config) == PolicyId::S) ++s;
    }
    return static_cast<double>(s) / static_cast<double>(r_int_trace.size());
}

void freeze_gate(Learner& agent_s, const Transition& fresh) {
    if (fresh.reward_ext > 0.0) {
        agent_s.set_loss_weight(1.0);
    }
}

std::uint64_t updates_due(std::uint64_t step, int per_32) {
    require(step >= 1, "updates_due: steps are 1-based");
    require(per_32 >= 0, "updates_due: negative rate");
    const auto rate = static_cast<std::uint64_t>(per_32);
    return step * rate / 32 - (step - 1) * rate / 32;
}

void KeaConfig::validate() const {
    switching.validate();
    scaling.validate();
    require(batch_size > 0, "train.batch_size must be positive");
    require(utd_agent >= 0 && utd_intrinsic >= 0, "update-to-data ratios must be nonnegative");
    require(intrinsic_batch > 0, "intrinsic.batch must be positive");
}

KeaController::KeaController(std::unique_ptr<Environment> env, std::unique_ptr<Learner> agent_n,
                             std::unique_ptr<Learner> agent_s, std::unique_ptr<IntrinsicModel> intrinsic,
                             ReplayBuffer buffer, KeaConfig config, std::uint64_t seed)
    : env_(std::move(env)),
      agent_n_(std::move(agent_n)),
      agent_s_(std::move(agent_s)),
      intrinsic_(std::move(intrinsic)),
      buffer_(std::move(buffer)),
      config_(config),
      env_rng_(make_rng(seed, 0xE4F)),
      act_rng_(make_rng(seed, 0xAC7)),
      sample_rng_(make_rng(seed, 0x5A3)) {
    config_.validate();
    require(env_ && agent_n_ && intrinsic_, "kea controller: environment, A^N and intrinsic model are required");
    require(agent_n_->obs_size() == env_->observation_size() && agent_n_->action_count() == env_->action_count(),
            "kea controller: A^N does not match the environment");
    if (!config_.enabled) {
        agent_s_.reset();
    } else {
        require(agent_s_ != nullptr, "kea controller: enabled run requires A^S");
        require(agent_s_->obs_size() == env_->observation_size() && agent_s_->action_count() == env_->action_count(),
                "kea controller: A^S does not match the environment");
        agent_s_->set_loss_weight(0.0);
    }
}

void KeaController::begin_episode() {
    obs_ = env_->reset(env_rng_).observation;
    intrinsic_->begin_episode(obs_);
    episode_return_ = 0.0;
    needs_reset_ = false;
}

bool KeaController::warmed_up() const {
    return buffer_.size() >= std::max(config_.warmup_samples, config_.batch_size);
}

CollectRecord KeaController::collect_step() {
    if (needs_reset_) begin_episode();

    CollectRecord rec;
    rec.policy = agent_s_ ? select_policy(last_score_, config_.switching) : PolicyId::N;
    const Learner& actor = rec.policy == PolicyId::S ? *agent_s_ : *agent_n_;
    rec.action = actor.act(obs_, ActMode::sample, act_rng_);
    rec.entropy_n = agent_n_->policy_entropy(obs_);

    EnvStep next = env_->step(rec.action);
    Transition t;
    t.obs = obs_;
    t.action = rec.action;
    t.reward_ext = next.reward_ext;
    t.next_obs = next.observation;
    t.terminated = next.terminated;
    t.truncated = next.truncated;
    t.behavior_policy = rec.policy;

    const IntrinsicSignal signal = intrinsic_->collect(t);
    last_score_ = signal.switch_score;
    rec.reward_ext = t.reward_ext;
    rec.reward_int = signal.reward;
    rec.switch_score = signal.switch_score;
    if (agent_s_) freeze_gate(*agent_s_, t);
    buffer_.push(t);

    step_count_ += 1;
    if (rec.policy == PolicyId::S) usage_s_count_ += 1;

    for (std::uint64_t k = updates_due(step_count_, config_.utd_intrinsic); k > 0; --k) {
        const std::size_t n = std::min(config_.intrinsic_batch, buffer_.size());
        std::vector<std::vector<double>> latest;
        latest.reserve(n);
        for (std::size_t i = 0; i < n; ++i) latest.push_back(buffer_.recent(i).next_obs);
        intrinsic_->train(latest);
        intrinsic_updates_ += 1;
    }

    episode_return_ += next.reward_ext;
    if (next.done()) {
        rec.episode_end = true;
        rec.episode_return = episode_return_;
        episode_count_ += 1;
        needs_reset_ = true;
    } else {
        obs_ = std::move(next.observation);
    }
    return rec;
}

TickRecord KeaController::train_tick() {
    TickRecord tick;
    if (!warmed_up()) return tick;
    tick.indices = buffer_.sample_indices(config_.batch_size, sample_rng_);
    std::vector<const Transition*> sampled;
    sampled.reserve(tick.indices.size());
    for (std::size_t i : tick.indices) sampled.push_back(&buffer_.at(i));

    const TrainingBatch batch = make_batch(recompute_intrinsic(sampled, *intrinsic_));
    if (observer_) observer_(PolicyId::N, batch);
    tick.losses_n = agent_n_->update(batch, config_.scaling);
    if (agent_s_) {
        // A^S learns from the task reward alone.
        const TrainingBatch extrinsic_only = without_intrinsic(batch);
        if (observer_) observer_(PolicyId::S, extrinsic_only);
        tick.losses_s = agent_s_->update(extrinsic_only, config_.scaling);
    }
    tick.trained = true;
    agent_updates_ += 1;
    return tick;
}

StepResult KeaController::step() {
    StepResult out;
    out.collect = collect_step();
    if (warmed_up()) {
        post_warmup_steps_ += 1;
        for (std::uint64_t k = updates_due(post_warmup_steps_, config_.utd_agent); k > 0; --k) {
            const TickRecord tick = train_tick();
            out.ticks += 1;
            out.losses_n_sum.critic1 += tick.losses_n.critic1;
            out.losses_n_sum.critic2 += tick.losses_n.critic2;
            out.losses_n_sum.actor += tick.losses_n.actor;
        }
    }
    return out;
}

double KeaController::usage_fraction() const {
    require(step_count_ >= 1, "usage_fraction: no steps collected");
    return static_cast<double>(usage_s_count_) / static_cast<double>(step_count_);
}

}  // namespace kea
