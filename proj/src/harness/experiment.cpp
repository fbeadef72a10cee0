#include "kea/harness/experiment.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdlib>
#include <exception>
#include <filesystem>
#include <fstream>
#include <mutex>
#include <thread>

#include "json.hpp"
#include "kea/agents/q_agent.hpp"
#include "kea/agents/sac.hpp"
#include "kea/core/error.hpp"
#include "kea/env/deepsea.hpp"
#include "kea/env/gridnav.hpp"
#include "kea/env/three_state.hpp"
#include "kea/harness/checkpoint.hpp"

namespace kea {

namespace fs = std::filesystem;

std::unique_ptr<Environment> make_environment(const EnvConfig& config, std::uint64_t run_seed) {
    if (config.name == "gridnav") {
        GridNavConfig g;
        g.max_steps = config.max_steps;
        g.goal_active = config.goal_active;
        g.goal = {config.goal_x, config.goal_y};
        return std::make_unique<GridNav>(g);
    }
    if (config.name == "deepsea") {
        DeepSeaConfig d;
        d.size = config.size;
        d.action_map_seed = config.seed + run_seed;
        d.identity_action_map = config.identity_map;
        return std::make_unique<DeepSea>(d);
    }
    if (config.name == "mdp3") return std::make_unique<ThreeStateMdp>();
    throw ConfigError("config key 'env.name': unknown environment '" + config.name + "'");
}

std::unique_ptr<Learner> make_learner(const AgentConfig& config, int obs_size, int action_count, std::uint64_t seed) {
    if (config.variant == "sac") return std::make_unique<SacAgent>(obs_size, action_count, config.sac, seed);
    if (config.variant == "dqn" || config.variant == "dqn_p" || config.variant == "sql") {
        return std::make_unique<QAgent>(obs_size, action_count, q_config_for_variant(config.variant, config.q), seed);
    }
    throw ConfigError("config key 'agent.variant': unknown variant '" + config.variant + "'");
}

KeaConfig make_kea_config(const ExperimentConfig& config) {
    KeaConfig k;
    k.enabled = config.kea_enabled;
    k.switching.sigma = config.sigma;
    k.scaling.beta_ext = config.agent.beta_ext;
    k.scaling.beta_int = 1.0;
    k.batch_size = config.batch_size;
    k.warmup_samples = config.warmup_samples;
    k.utd_agent = config.utd_agent;
    k.utd_intrinsic = config.utd_intrinsic;
    k.intrinsic_batch = config.intrinsic_batch;
    return k;
}

std::unique_ptr<KeaController> build_controller(const ExperimentConfig& config, std::uint64_t seed) {
    config.validate();
    auto env = make_environment(config.env, seed);
    const int obs = env->observation_size();
    const int actions = env->action_count();
    auto agent_n = make_learner(config.agent, obs, actions, derive_seed(seed, 1));
    std::unique_ptr<Learner> agent_s;
    if (config.kea_enabled) agent_s = make_learner(config.agent, obs, actions, derive_seed(seed, 2));
    auto intrinsic = make_intrinsic(config.intrinsic, obs, derive_seed(seed, 3));
    return std::make_unique<KeaController>(std::move(env), std::move(agent_n), std::move(agent_s), std::move(intrinsic),
                                           ReplayBuffer(config.replay_capacity, static_cast<std::size_t>(obs)),
                                           make_kea_config(config), derive_seed(seed, 4));
}

namespace {

struct MeanStd {
    double mean = 0.0;
    double std = 0.0;
};

MeanStd mean_std(const std::vector<double>& xs) {
    MeanStd out;
    if (xs.empty()) return out;
    for (double x : xs) out.mean += x;
    out.mean /= static_cast<double>(xs.size());
    double ss = 0.0;
    for (double x : xs) ss += (x - out.mean) * (x - out.mean);
    out.std = std::sqrt(ss / static_cast<double>(xs.size()));
    return out;
}

}  // namespace

EvalResult evaluate(const Learner& agent, const EnvFactory& make_env, int n_episodes, Rng& rng, ActMode mode) {
    require(n_episodes >= 1, "evaluate: n_episodes must be >= 1");
    std::vector<double> returns;
    returns.reserve(static_cast<std::size_t>(n_episodes));
    for (int e = 0; e < n_episodes; ++e) {
        auto env = make_env();
        EnvStep s = env->reset(rng);
        double total = 0.0;
        while (!s.done()) {
            s = env->step(agent.act(s.observation, mode, rng));
            total += s.reward_ext;
        }
        returns.push_back(total);
    }
    const MeanStd ms = mean_std(returns);
    return {ms.mean, ms.std};
}

namespace {

// Running sums between two evaluation points.
struct Window {
    double intrinsic = 0.0;
    double entropy = 0.0;
    std::uint64_t steps = 0;
    double critic = 0.0;
    double actor = 0.0;
    std::uint64_t ticks = 0;
    std::vector<double> episode_returns;

    void add(const StepResult& r) {
        intrinsic += r.collect.reward_int;
        entropy += r.collect.entropy_n;
        steps += 1;
        critic += 0.5 * (r.losses_n_sum.critic1 + r.losses_n_sum.critic2);
        actor += r.losses_n_sum.actor;
        ticks += r.ticks;
        if (r.collect.episode_end) episode_returns.push_back(r.collect.episode_return);
    }
};

}  // namespace

SeedRun run_seed(const ExperimentConfig& config, std::uint64_t seed, const std::string& run_dir, const StepHook& hook) {
    auto ctrl = build_controller(config, seed);
    Rng eval_rng = make_rng(seed, 0xE7A1);
    const EnvConfig env_cfg = config.env;
    const EnvFactory factory = [env_cfg, seed] { return make_environment(env_cfg, seed); };
    const bool episode_budget = config.total_episodes > 0;
    const bool episode_cadence = config.eval_every_episodes > 0;

    SeedRun out;
    out.seed = seed;
    out.run_dir = run_dir;
    Window window;
    MeanStd last_train_returns;

    auto emit = [&] {
        RunRecord rec;
        rec.step = ctrl->step_count();
        rec.episode = static_cast<double>(ctrl->episode_count());
        if (config.eval_mode == EvalMode::train) {
            if (!window.episode_returns.empty()) last_train_returns = mean_std(window.episode_returns);
            rec.return_mean = last_train_returns.mean;
            rec.return_std = last_train_returns.std;
        } else {
            const ActMode mode = config.eval_mode == EvalMode::greedy ? ActMode::greedy : ActMode::sample;
            const EvalResult ev = evaluate(ctrl->agent_n(), factory, config.eval_episodes, eval_rng, mode);
            rec.return_mean = ev.return_mean;
            rec.return_std = ev.return_std;
        }
        if (window.steps > 0) {
            rec.intrinsic_mean = window.intrinsic / static_cast<double>(window.steps);
            rec.entropy_mean = window.entropy / static_cast<double>(window.steps);
        }
        if (window.ticks > 0) {
            rec.loss_critic = window.critic / static_cast<double>(window.ticks);
            rec.loss_actor = window.actor / static_cast<double>(window.ticks);
        }
        rec.usage_s = ctrl->step_count() > 0 ? ctrl->usage_fraction() : 0.0;
        out.records.push_back(rec);
        window = Window{};
    };

    while (episode_budget ? ctrl->episode_count() < config.total_episodes : ctrl->step_count() < config.total_steps) {
        const StepResult r = ctrl->step();
        window.add(r);
        if (hook) hook(*ctrl, r);
        const bool due = episode_cadence
                             ? r.collect.episode_end && ctrl->episode_count() % config.eval_every_episodes == 0
                             : ctrl->step_count() % config.eval_every == 0;
        if (due) emit();
    }
    if (out.records.empty() || out.records.back().step != ctrl->step_count()) emit();

    out.steps = ctrl->step_count();
    out.episodes = ctrl->episode_count();
    out.agent_updates = ctrl->agent_update_count();
    out.intrinsic_updates = ctrl->intrinsic_update_count();
    out.usage_s = ctrl->usage_fraction();

    if (!run_dir.empty()) {
        std::error_code ec;
        fs::create_directories(run_dir, ec);
        if (ec) throw std::runtime_error("cannot create run directory '" + run_dir + "': " + ec.message());
        write_metrics_csv((fs::path(run_dir) / "metrics.csv").string(), out.records);
        if (config.checkpoint) save_checkpoint((fs::path(run_dir) / "checkpoint.json").string(), config, seed, *ctrl);
    }
    return out;
}

std::string resolve_out_dir(const ExperimentConfig& config, const std::string& cli_out) {
    if (!cli_out.empty()) return cli_out;
    if (!config.out_dir.empty()) return config.out_dir;
    if (const char* env = std::getenv("KEA_OUT_DIR"); env != nullptr && *env != '\0') return env;
    return "runs";
}

ExperimentResult run_experiment(const ExperimentConfig& config, const std::string& out_dir) {
    config.validate();
    std::error_code ec;
    fs::create_directories(out_dir, ec);
    if (ec) throw std::runtime_error("cannot create output directory '" + out_dir + "': " + ec.message());

    ExperimentResult result;
    result.out_dir = out_dir;
    result.runs.resize(config.seeds.size());

    std::atomic<std::size_t> next{0};
    std::exception_ptr failure;
    std::mutex failure_mutex;
    auto worker = [&] {
        for (std::size_t i = next++; i < config.seeds.size(); i = next++) {
            try {
                const std::uint64_t s = config.seeds[i];
                const std::string dir = (fs::path(out_dir) / ("seed_" + std::to_string(s))).string();
                result.runs[i] = run_seed(config, s, dir);
            } catch (...) {
                std::lock_guard<std::mutex> lock(failure_mutex);
                if (!failure) failure = std::current_exception();
            }
        }
    };
    const std::size_t n_workers =
        std::clamp<std::size_t>(static_cast<std::size_t>(std::max(config.workers, 1)), 1, config.seeds.size());
    if (n_workers == 1) {
        worker();
    } else {
        std::vector<std::thread> pool;
        for (std::size_t w = 0; w < n_workers; ++w) pool.emplace_back(worker);
        for (auto& t : pool) t.join();
    }
    if (failure) std::rethrow_exception(failure);

    nlohmann::json manifest;
    manifest["config_hash"] = config_hash(config);
    manifest["config"] = canonical_config(config);
    manifest["seeds"] = config.seeds;
    manifest["runs"] = nlohmann::json::array();
    for (const SeedRun& r : result.runs) {
        manifest["runs"].push_back({{"seed", r.seed},
                                    {"dir", r.run_dir},
                                    {"steps", r.steps},
                                    {"episodes", r.episodes},
                                    {"agent_updates", r.agent_updates},
                                    {"final_return_mean", r.records.back().return_mean},
                                    {"usage_s", r.usage_s}});
    }
    result.manifest_path = (fs::path(out_dir) / "manifest.json").string();
    std::ofstream f(result.manifest_path);
    if (!f) throw std::runtime_error("cannot write '" + result.manifest_path + "'");
    f << manifest.dump(2) << '\n';
    if (!f) throw std::runtime_error("write failed for '" + result.manifest_path + "'");
    return result;
}

}  // namespace kea
