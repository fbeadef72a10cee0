#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "kea/tensor/adam.hpp"
#include "kea/tensor/mlp.hpp"
#include "kea/tensor/running_stats.hpp"

namespace kea {

struct RndConfig {
    std::vector<int> hidden{16, 32};
    int embed_dim = 16;
    Activation activation = Activation::relu;
    double lr = 3e-4;
    double clip = 2.0;
    double scale = 0.5;
    double grad_clip_norm = 0.5;
};

/**
 * Random network distillation.
 *
 * raw(obs)     = ||predictor(obs) - target(obs)||^2
 * novelty(obs) = min(raw / max(running_std, 1e-8), clip)      in [0, clip]
 * reward(obs)  = scale * novelty(obs)                         in [0, scale * clip]
 *
 * The running statistics track raw errors of freshly collected observations only
 * (observe()); reward() and novelty() read them without mutation.
 */
class RndModel {
public:
    RndModel(int obs_size, RndConfig config, std::uint64_t seed);

    double raw(std::span<const double> obs) const;
    Vector raw_batch(const Matrix& obs) const;

    double novelty_from_raw(double raw_error) const;
    double novelty(std::span<const double> obs) const { return novelty_from_raw(raw(obs)); }
    double reward(std::span<const double> obs) const { return config_.scale * novelty(obs); }

    /// Collection path: folds raw(obs) into the running stats, then returns reward(obs).
    double observe(std::span<const double> obs);
    /// Folds raw(obs) into the running stats and returns that raw error.
    double record(std::span<const double> obs);

    /// One Adam step on the mean raw error over the batch (one sample per column). Returns the pre-step loss.
    double train(const Matrix& obs_batch);
    double train(const std::vector<std::vector<double>>& obs_batch);

    const MlpParams& target() const { return target_; }
    const MlpParams& predictor() const { return predictor_; }
    const RunningStats& stats() const { return stats_; }
    const RndConfig& config() const { return config_; }
    int obs_size() const { return target_.input_size(); }

    // Test and checkpoint hooks.
    void set_predictor(MlpParams predictor);
    void set_target(MlpParams target);
    void set_stats(RunningStats stats) { stats_ = stats; }

private:
    RndConfig config_;
    MlpParams target_;
    MlpParams predictor_;
    AdamState adam_;
    RunningStats stats_;
};

/// rnd_reward arithmetic on an explicit raw value: scale * min(normalize(stats, raw), clip).
double rnd_reward_from_raw(double raw_error, const RunningStats& stats, double clip, double scale);

}  // namespace kea
