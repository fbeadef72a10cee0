#pragma once

#include <cstdint>
#include <functional>
#include <memory>
#include <string>
#include <vector>

#include "kea/controller/kea.hpp"
#include "kea/harness/config.hpp"
#include "kea/harness/metrics.hpp"

namespace kea {

/// The run seed offsets the deepsea action-map seed so each seed sees its own map.
std::unique_ptr<Environment> make_environment(const EnvConfig& config, std::uint64_t run_seed);

std::unique_ptr<Learner> make_learner(const AgentConfig& config, int obs_size, int action_count, std::uint64_t seed);

KeaConfig make_kea_config(const ExperimentConfig& config);

std::unique_ptr<KeaController> build_controller(const ExperimentConfig& config, std::uint64_t seed);

struct EvalResult {
    double return_mean = 0.0;
    double return_std = 0.0;  // population std over episodes
};

using EnvFactory = std::function<std::unique_ptr<Environment>()>;

/// Rolls out n_episodes on fresh environments and averages the undiscounted raw returns.
EvalResult evaluate(const Learner& agent, const EnvFactory& make_env, int n_episodes, Rng& rng,
                    ActMode mode = ActMode::greedy);

struct SeedRun {
    std::uint64_t seed = 0;
    std::vector<RunRecord> records;
    std::uint64_t steps = 0;
    std::uint64_t episodes = 0;
    std::uint64_t agent_updates = 0;
    std::uint64_t intrinsic_updates = 0;
    double usage_s = 0.0;
    std::string run_dir;
};

/// Hook called after every collection step; lets callers inspect the live controller.
using StepHook = std::function<void(const KeaController&, const StepResult&)>;

/**
 * Trains one seed to its step or episode budget, emitting a RunRecord at every evaluation
 * point and at the end. When run_dir is nonempty, writes metrics.csv (and checkpoint.json
 * if enabled) there.
 */
SeedRun run_seed(const ExperimentConfig& config, std::uint64_t seed, const std::string& run_dir = "",
                 const StepHook& hook = {});

struct ExperimentResult {
    std::string out_dir;
    std::string manifest_path;
    std::vector<SeedRun> runs;
};

/// --out, then run.out_dir, then $KEA_OUT_DIR, then "runs".
std::string resolve_out_dir(const ExperimentConfig& config, const std::string& cli_out = "");

/// Runs every configured seed (up to run.workers at a time) under out_dir/seed_<S>/ and writes manifest.json.
ExperimentResult run_experiment(const ExperimentConfig& config, const std::string& out_dir);

}  // namespace kea
