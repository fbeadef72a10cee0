#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "kea/agents/q_agent.hpp"
#include "kea/agents/sac.hpp"
#include "kea/intrinsic/intrinsic_model.hpp"

namespace kea {

struct EnvConfig {
    std::string name = "gridnav";  // gridnav | deepsea | mdp3
    int size = 10;                 // deepsea N
    std::uint64_t seed = 0;        // deepsea action-map seed (offset by the run seed)
    int max_steps = 100;           // gridnav time limit
    bool identity_map = false;     // deepsea
    bool goal_active = true;       // gridnav
    int goal_x = 40;
    int goal_y = 10;
};

struct AgentConfig {
    std::string variant = "sac";  // sac | dqn | dqn_p | sql
    SacConfig sac;
    QConfig q;
    double beta_ext = 100.0;
};

enum class EvalMode { greedy, sample, train };

EvalMode parse_eval_mode(const std::string& name);
std::string to_string(EvalMode mode);

struct ExperimentConfig {
    EnvConfig env;
    AgentConfig agent;
    IntrinsicConfig intrinsic;
    std::size_t intrinsic_batch = 1;
    bool kea_enabled = true;
    double sigma = 1.0;
    std::size_t replay_capacity = 300000;

    std::uint64_t total_steps = 300000;
    std::uint64_t total_episodes = 0;  // > 0 switches to an episode budget
    std::size_t warmup_samples = 1024;
    std::size_t batch_size = 64;
    int utd_agent = 32;
    int utd_intrinsic = 32;

    std::uint64_t eval_every = 10000;        // steps
    std::uint64_t eval_every_episodes = 0;   // > 0 evaluates on episode boundaries instead
    int eval_episodes = 10;
    EvalMode eval_mode = EvalMode::greedy;

    std::vector<std::uint64_t> seeds{0};
    std::string out_dir;  // empty: KEA_OUT_DIR, then "runs"
    bool checkpoint = true;
    int workers = 1;

    void validate() const;
};

/**
 * Parses "key = value" lines with dotted keys; '#' starts a comment. Unknown keys and
 * malformed values raise ConfigError naming the key. Keys not present keep their defaults.
 */
ExperimentConfig parse_config(const std::string& text);
ExperimentConfig load_config(const std::string& path);

/// Applies a single key/value override with the same validation as the file parser.
void apply_config_value(ExperimentConfig& config, const std::string& key, const std::string& value);

/// Every key with its effective value, one per line in key order.
std::string canonical_config(const ExperimentConfig& config);

/// FNV-1a 64 of canonical_config(config), as 16 hex digits.
std::string config_hash(const ExperimentConfig& config);

}  // namespace kea
