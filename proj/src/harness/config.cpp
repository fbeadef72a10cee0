#include "kea/harness/config.hpp"

#include <charconv>
#include <cstdio>
#include <fstream>
#include <functional>
#include <sstream>

#include "kea/core/error.hpp"

namespace kea {

EvalMode parse_eval_mode(const std::string& name) {
    if (name == "greedy") return EvalMode::greedy;
    if (name == "sample") return EvalMode::sample;
    if (name == "train") return EvalMode::train;
    throw ConfigError("eval.mode: unknown value '" + name + "'");
}

std::string to_string(EvalMode mode) {
    switch (mode) {
        case EvalMode::greedy: return "greedy";
        case EvalMode::sample: return "sample";
        case EvalMode::train: return "train";
    }
    return "greedy";
}

namespace {

std::string trim(const std::string& s) {
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string::npos) return "";
    const auto e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
}

[[noreturn]] void bad_value(const std::string& key, const std::string& value, const char* expected) {
    throw ConfigError("config key '" + key + "': expected " + expected + ", got '" + value + "'");
}

template <typename T>
T parse_number(const std::string& key, const std::string& value, const char* expected) {
    T out{};
    const char* first = value.data();
    const char* last = value.data() + value.size();
    const auto [ptr, ec] = std::from_chars(first, last, out);
    if (ec != std::errc() || ptr != last) bad_value(key, value, expected);
    return out;
}

double parse_double(const std::string& key, const std::string& value) {
    // from_chars for double is not available on every standard library in use; strtod is locale-free enough here.
    char* end = nullptr;
    const double out = std::strtod(value.c_str(), &end);
    if (value.empty() || end != value.c_str() + value.size()) bad_value(key, value, "a real number");
    return out;
}

bool parse_bool(const std::string& key, const std::string& value) {
    if (value == "true" || value == "1") return true;
    if (value == "false" || value == "0") return false;
    bad_value(key, value, "true or false");
}

template <typename T>
std::vector<T> parse_list(const std::string& key, const std::string& value) {
    std::vector<T> out;
    std::stringstream ss(value);
    std::string item;
    while (std::getline(ss, item, ',')) {
        out.push_back(parse_number<T>(key, trim(item), "a comma-separated integer list"));
    }
    return out;
}

std::string fmt_double(double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

template <typename T>
std::string fmt_list(const std::vector<T>& values) {
    std::string out;
    for (std::size_t i = 0; i < values.size(); ++i) {
        if (i > 0) out += ",";
        out += std::to_string(values[i]);
    }
    return out;
}

std::string fmt_bool(bool b) { return b ? "true" : "false"; }

struct Field {
    std::function<void(ExperimentConfig&, const std::string&, const std::string&)> set;
    std::function<std::string(const ExperimentConfig&)> get;
};

#define KEA_DOUBLE(member)                                                                              \
    Field {                                                                                            \
        [](ExperimentConfig& c, const std::string& k, const std::string& v) { c.member = parse_double(k, v); }, \
            [](const ExperimentConfig& c) { return fmt_double(c.member); }                             \
    }
#define KEA_INT(member, type)                                                                          \
    Field {                                                                                            \
        [](ExperimentConfig& c, const std::string& k, const std::string& v) {                          \
            c.member = parse_number<type>(k, v, "an integer");                                         \
        },                                                                                             \
            [](const ExperimentConfig& c) { return std::to_string(c.member); }                         \
    }
#define KEA_BOOL(member)                                                                                \
    Field {                                                                                            \
        [](ExperimentConfig& c, const std::string& k, const std::string& v) { c.member = parse_bool(k, v); }, \
            [](const ExperimentConfig& c) { return fmt_bool(c.member); }                               \
    }

const std::map<std::string, Field>& fields() {
    static const std::map<std::string, Field> table = {
        {"env.name",
         {[](ExperimentConfig& c, const std::string& k, const std::string& v) {
              if (v != "gridnav" && v != "deepsea" && v != "mdp3") bad_value(k, v, "gridnav, deepsea or mdp3");
              c.env.name = v;
          },
          [](const ExperimentConfig& c) { return c.env.name; }}},
        {"env.size", KEA_INT(env.size, int)},
        {"env.seed", KEA_INT(env.seed, std::uint64_t)},
        {"env.max_steps", KEA_INT(env.max_steps, int)},
        {"env.identity_map", KEA_BOOL(env.identity_map)},
        {"env.goal_active", KEA_BOOL(env.goal_active)},
        {"env.goal_x", KEA_INT(env.goal_x, int)},
        {"env.goal_y", KEA_INT(env.goal_y, int)},

        {"agent.variant",
         {[](ExperimentConfig& c, const std::string& k, const std::string& v) {
              if (v != "sac" && v != "dqn" && v != "dqn_p" && v != "sql") bad_value(k, v, "sac, dqn, dqn_p or sql");
              c.agent.variant = v;
          },
          [](const ExperimentConfig& c) { return c.agent.variant; }}},
        {"agent.alpha", KEA_DOUBLE(agent.sac.alpha)},
        {"agent.gamma",
         {[](ExperimentConfig& c, const std::string& k, const std::string& v) {
              c.agent.sac.gamma = parse_double(k, v);
              c.agent.q.gamma = c.agent.sac.gamma;
          },
          [](const ExperimentConfig& c) { return fmt_double(c.agent.sac.gamma); }}},
        {"agent.tau",
         {[](ExperimentConfig& c, const std::string& k, const std::string& v) {
              c.agent.sac.tau = parse_double(k, v);
              c.agent.q.tau = c.agent.sac.tau;
          },
          [](const ExperimentConfig& c) { return fmt_double(c.agent.sac.tau); }}},
        {"agent.lr_actor", KEA_DOUBLE(agent.sac.lr_actor)},
        {"agent.lr_critic",
         {[](ExperimentConfig& c, const std::string& k, const std::string& v) {
              c.agent.sac.lr_critic = parse_double(k, v);
              c.agent.q.lr = c.agent.sac.lr_critic;
          },
          [](const ExperimentConfig& c) { return fmt_double(c.agent.sac.lr_critic); }}},
        {"agent.beta_ext", KEA_DOUBLE(agent.beta_ext)},
        {"agent.epsilon", KEA_DOUBLE(agent.q.epsilon)},
        {"agent.temperature", KEA_DOUBLE(agent.q.temperature)},
        {"agent.hidden",
         {[](ExperimentConfig& c, const std::string& k, const std::string& v) {
              c.agent.sac.hidden = parse_list<int>(k, v);
              c.agent.q.hidden = c.agent.sac.hidden;
          },
          [](const ExperimentConfig& c) { return fmt_list(c.agent.sac.hidden); }}},
        {"agent.activation",
         {[](ExperimentConfig& c, const std::string& k, const std::string& v) {
              if (v != "relu" && v != "tanh") bad_value(k, v, "relu or tanh");
              c.agent.sac.activation = parse_activation(v);
              c.agent.q.activation = c.agent.sac.activation;
          },
          [](const ExperimentConfig& c) { return to_string(c.agent.sac.activation); }}},

        {"intrinsic.kind",
         {[](ExperimentConfig& c, const std::string&, const std::string& v) {
              c.intrinsic.kind = parse_intrinsic_kind(v);
          },
          [](const ExperimentConfig& c) { return to_string(c.intrinsic.kind); }}},
        {"intrinsic.scale", KEA_DOUBLE(intrinsic.rnd.scale)},
        {"intrinsic.clip", KEA_DOUBLE(intrinsic.rnd.clip)},
        {"intrinsic.embed_dim", KEA_INT(intrinsic.rnd.embed_dim, int)},
        {"intrinsic.lr", KEA_DOUBLE(intrinsic.rnd.lr)},
        {"intrinsic.grad_clip", KEA_DOUBLE(intrinsic.rnd.grad_clip_norm)},
        {"intrinsic.noveld_c", KEA_DOUBLE(intrinsic.noveld_c)},
        {"intrinsic.hidden",
         {[](ExperimentConfig& c, const std::string& k, const std::string& v) {
              c.intrinsic.rnd.hidden = parse_list<int>(k, v);
          },
          [](const ExperimentConfig& c) { return fmt_list(c.intrinsic.rnd.hidden); }}},
        {"intrinsic.batch", KEA_INT(intrinsic_batch, std::size_t)},

        {"kea.enabled", KEA_BOOL(kea_enabled)},
        {"kea.sigma", KEA_DOUBLE(sigma)},

        {"replay.capacity", KEA_INT(replay_capacity, std::size_t)},

        {"train.total_steps", KEA_INT(total_steps, std::uint64_t)},
        {"train.total_episodes", KEA_INT(total_episodes, std::uint64_t)},
        {"train.warmup_samples", KEA_INT(warmup_samples, std::size_t)},
        {"train.batch_size", KEA_INT(batch_size, std::size_t)},
        {"train.utd_agent", KEA_INT(utd_agent, int)},
        {"train.utd_intrinsic", KEA_INT(utd_intrinsic, int)},

        {"eval.every", KEA_INT(eval_every, std::uint64_t)},
        {"eval.every_episodes", KEA_INT(eval_every_episodes, std::uint64_t)},
        {"eval.episodes", KEA_INT(eval_episodes, int)},
        {"eval.mode",
         {[](ExperimentConfig& c, const std::string&, const std::string& v) { c.eval_mode = parse_eval_mode(v); },
          [](const ExperimentConfig& c) { return to_string(c.eval_mode); }}},

        {"run.seeds",
         {[](ExperimentConfig& c, const std::string& k, const std::string& v) {
              c.seeds = parse_list<std::uint64_t>(k, v);
          },
          [](const ExperimentConfig& c) { return fmt_list(c.seeds); }}},
        {"run.out_dir",
         {[](ExperimentConfig& c, const std::string&, const std::string& v) { c.out_dir = v; },
          [](const ExperimentConfig& c) { return c.out_dir; }}},
        {"run.checkpoint", KEA_BOOL(checkpoint)},
        {"run.workers", KEA_INT(workers, int)},
    };
    return table;
}

#undef KEA_DOUBLE
#undef KEA_INT
#undef KEA_BOOL

}  // namespace

void ExperimentConfig::validate() const {
    auto check = [](bool ok, const char* key, const char* what) {
        if (!ok) throw ConfigError(std::string("config key '") + key + "': " + what);
    };
    check(env.size >= 2, "env.size", "must be at least 2");
    check(env.max_steps > 0, "env.max_steps", "must be positive");
    check(agent.beta_ext >= 0.0, "agent.beta_ext", "must be nonnegative");
    check(!agent.sac.hidden.empty(), "agent.hidden", "needs at least one hidden layer");
    check(intrinsic_batch > 0, "intrinsic.batch", "must be positive");
    check(sigma >= 0.0, "kea.sigma", "must be nonnegative");
    check(replay_capacity > 0, "replay.capacity", "must be positive");
    check(total_steps > 0 || total_episodes > 0, "train.total_steps", "needs a positive step or episode budget");
    check(batch_size > 0, "train.batch_size", "must be positive");
    check(utd_agent >= 0, "train.utd_agent", "must be nonnegative");
    check(utd_intrinsic >= 0, "train.utd_intrinsic", "must be nonnegative");
    check(eval_every > 0 || eval_every_episodes > 0, "eval.every", "needs a positive evaluation interval");
    check(eval_episodes > 0, "eval.episodes", "must be positive");
    check(!seeds.empty(), "run.seeds", "must list at least one seed");
    check(workers > 0, "run.workers", "must be positive");
    try {
        agent.sac.validate();
        agent.q.validate();
    } catch (const ContractViolation& e) {
        throw ConfigError(std::string("agent block: ") + e.what());
    }
}

void apply_config_value(ExperimentConfig& config, const std::string& key, const std::string& value) {
    const auto& table = fields();
    const auto it = table.find(key);
    if (it == table.end()) {
        throw ConfigError("unknown config key '" + key + "'");
    }
    it->second.set(config, key, value);
}

ExperimentConfig parse_config(const std::string& text) {
    ExperimentConfig config;
    std::stringstream ss(text);
    std::string line;
    int line_no = 0;
    while (std::getline(ss, line)) {
        ++line_no;
        const auto hash = line.find('#');
        if (hash != std::string::npos) line = line.substr(0, hash);
        line = trim(line);
        if (line.empty()) continue;
        const auto eq = line.find('=');
        if (eq == std::string::npos) {
            throw ConfigError("config line " + std::to_string(line_no) + ": expected 'key = value'");
        }
        apply_config_value(config, trim(line.substr(0, eq)), trim(line.substr(eq + 1)));
    }
    config.validate();
    return config;
}

ExperimentConfig load_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot read config file '" + path + "'");
    std::stringstream ss;
    ss << in.rdbuf();
    return parse_config(ss.str());
}

std::string canonical_config(const ExperimentConfig& config) {
    std::string out;
    for (const auto& [key, field] : fields()) {
        out += key + " = " + field.get(config) + "\n";
    }
    return out;
}

std::string config_hash(const ExperimentConfig& config) {
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (unsigned char ch : canonical_config(config)) {
        h ^= ch;
        h *= 0x100000001b3ULL;
    }
    char buf[17];
    std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(h));
    return buf;
}

}  // namespace kea
