#pragma once

#include <cstdint>
#include <memory>
#include <span>
#include <string>
#include <vector>

#include "kea/intrinsic/counters.hpp"
#include "kea/intrinsic/rnd.hpp"
#include "kea/replay/replay_buffer.hpp"

namespace kea {

enum class IntrinsicKind { none, rnd, noveld, count };

IntrinsicKind parse_intrinsic_kind(const std::string& name);
std::string to_string(IntrinsicKind kind);

struct IntrinsicSignal {
    // Term added to the extrinsic part of the Bellman target (already scaled).
    double reward = 0.0;
    // Unscaled normalized novelty; the quantity compared against the switching threshold.
    double switch_score = 0.0;
};

/**
 * Intrinsic-reward source used by the controller.
 *
 * collect() is the collection path: it may update normalizers and episodic counts and
 * records the episodic first-visit flag on the transition. score() is the replay path and
 * must be a pure function of the model state and the stored transition.
 */
class IntrinsicModel {
public:
    virtual ~IntrinsicModel() = default;

    virtual IntrinsicKind kind() const = 0;
    virtual void begin_episode(std::span<const double> /*initial_obs*/) {}
    virtual IntrinsicSignal collect(Transition& t) = 0;
    virtual double score(const Transition& t) const = 0;
    /// One optimisation step on the given next-observations. Returns the pre-step loss.
    virtual double train(const std::vector<std::vector<double>>& /*next_obs*/) { return 0.0; }
    /// Reward for landing in obs under the current model, without any state change.
    virtual double state_reward(std::span<const double> obs) const = 0;

    virtual const RndModel* rnd() const { return nullptr; }
};

class NoIntrinsic final : public IntrinsicModel {
public:
    IntrinsicKind kind() const override { return IntrinsicKind::none; }
    IntrinsicSignal collect(Transition&) override { return {}; }
    double score(const Transition&) const override { return 0.0; }
    double state_reward(std::span<const double>) const override { return 0.0; }
};

class RndIntrinsic final : public IntrinsicModel {
public:
    RndIntrinsic(int obs_size, RndConfig config, std::uint64_t seed) : model_(obs_size, std::move(config), seed) {}

    IntrinsicKind kind() const override { return IntrinsicKind::rnd; }
    IntrinsicSignal collect(Transition& t) override;
    double score(const Transition& t) const override { return model_.reward(t.next_obs); }
    double train(const std::vector<std::vector<double>>& next_obs) override { return model_.train(next_obs); }
    double state_reward(std::span<const double> obs) const override { return model_.reward(obs); }

    const RndModel* rnd() const override { return &model_; }
    RndModel& model() { return model_; }

private:
    RndModel model_;
};

/// max(nov_next - c * nov_current, 0) when next is a first episodic visit, else 0.
double noveld_combine(double nov_next, double nov_current, double c, bool first_visit);

/// Novelty difference of rnd rewards gated by the episodic count; increments the counter for next_obs first.
double noveld_reward(const RndModel& model, std::span<const double> obs, std::span<const double> next_obs,
                     EpisodicCounter& counter, double c = 0.5);

class NovelDIntrinsic final : public IntrinsicModel {
public:
    NovelDIntrinsic(int obs_size, RndConfig config, std::uint64_t seed, double c = 0.5);

    IntrinsicKind kind() const override { return IntrinsicKind::noveld; }
    void begin_episode(std::span<const double> initial_obs) override;
    IntrinsicSignal collect(Transition& t) override;
    double score(const Transition& t) const override;
    double train(const std::vector<std::vector<double>>& next_obs) override { return model_.train(next_obs); }
    double state_reward(std::span<const double> obs) const override { return model_.reward(obs); }

    const RndModel* rnd() const override { return &model_; }
    RndModel& model() { return model_; }
    double c() const { return c_; }

private:
    RndModel model_;
    EpisodicCounter episode_;
    double c_;
};

// Tabular 1/N(s') bonus over lifetime visit counts.
class CountIntrinsic final : public IntrinsicModel {
public:
    IntrinsicKind kind() const override { return IntrinsicKind::count; }
    IntrinsicSignal collect(Transition& t) override;
    double score(const Transition& t) const override { return state_reward(t.next_obs); }
    double state_reward(std::span<const double> obs) const override;

    const VisitCounter& counter() const { return counter_; }

private:
    VisitCounter counter_;
};

struct IntrinsicConfig {
    IntrinsicKind kind = IntrinsicKind::rnd;
    RndConfig rnd;
    double noveld_c = 0.5;
};

std::unique_ptr<IntrinsicModel> make_intrinsic(const IntrinsicConfig& config, int obs_size, std::uint64_t seed);

}  // namespace kea
