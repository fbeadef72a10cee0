#include "kea/harness/checkpoint.hpp"

#include <fstream>
#include <sstream>

#include "kea/agents/q_agent.hpp"
#include "kea/agents/sac.hpp"
#include "kea/core/error.hpp"
#include "kea/harness/experiment.hpp"

namespace kea {

using nlohmann::json;

json mlp_to_json(const MlpParams& params) {
    json j;
    j["layer_sizes"] = params.layer_sizes;
    j["activation"] = to_string(params.activation);
    j["weights"] = json::array();
    j["biases"] = json::array();
    for (std::size_t l = 0; l < params.num_layers(); ++l) {
        const Matrix& w = params.weights[l];
        // Row-major flattening.
        std::vector<double> flat;
        flat.reserve(static_cast<std::size_t>(w.size()));
        for (Eigen::Index r = 0; r < w.rows(); ++r)
            for (Eigen::Index c = 0; c < w.cols(); ++c) flat.push_back(w(r, c));
        j["weights"].push_back(flat);
        j["biases"].push_back(std::vector<double>(params.biases[l].data(), params.biases[l].data() + params.biases[l].size()));
    }
    return j;
}

MlpParams mlp_from_json(const json& j) {
    MlpParams p;
    p.layer_sizes = j.at("layer_sizes").get<std::vector<int>>();
    p.activation = parse_activation(j.at("activation").get<std::string>());
    const auto& ws = j.at("weights");
    const auto& bs = j.at("biases");
    if (p.layer_sizes.size() < 2 || ws.size() != p.layer_sizes.size() - 1 || bs.size() != ws.size()) {
        throw std::runtime_error("checkpoint: network layer count does not match layer_sizes");
    }
    for (std::size_t l = 0; l < ws.size(); ++l) {
        const int rows = p.layer_sizes[l + 1];
        const int cols = p.layer_sizes[l];
        const auto flat = ws[l].get<std::vector<double>>();
        const auto bias = bs[l].get<std::vector<double>>();
        if (flat.size() != static_cast<std::size_t>(rows) * static_cast<std::size_t>(cols) ||
            bias.size() != static_cast<std::size_t>(rows)) {
            throw std::runtime_error("checkpoint: layer " + std::to_string(l) + " has the wrong number of entries");
        }
        Matrix w(rows, cols);
        for (int r = 0; r < rows; ++r)
            for (int c = 0; c < cols; ++c) w(r, c) = flat[static_cast<std::size_t>(r) * cols + c];
        p.weights.push_back(std::move(w));
        p.biases.push_back(Eigen::Map<const Vector>(bias.data(), rows));
    }
    validate_shapes(p);
    return p;
}

namespace {

json stats_to_json(const RunningStats& s) { return {{"count", s.count}, {"mean", s.mean}, {"m2", s.m2}}; }

RunningStats stats_from_json(const json& j) {
    RunningStats s;
    s.count = j.at("count").get<std::uint64_t>();
    s.mean = j.at("mean").get<double>();
    s.m2 = j.at("m2").get<double>();
    return s;
}

RndModel* mutable_rnd(IntrinsicModel& model) {
    if (auto* r = dynamic_cast<RndIntrinsic*>(&model)) return &r->model();
    if (auto* n = dynamic_cast<NovelDIntrinsic*>(&model)) return &n->model();
    return nullptr;
}

}  // namespace

void save_checkpoint(const std::string& path, const ExperimentConfig& config, std::uint64_t seed,
                     const KeaController& controller) {
    json j;
    j["config"] = canonical_config(config);
    j["seed"] = seed;
    j["steps"] = controller.step_count();
    const Learner& agent = controller.agent_n();
    json a;
    a["variant"] = agent.variant();
    if (const auto* sac = dynamic_cast<const SacAgent*>(&agent)) {
        a["policy"] = mlp_to_json(sac->policy());
    } else if (const auto* q = dynamic_cast<const QAgent*>(&agent)) {
        a["q"] = mlp_to_json(q->q());
        a["q_target"] = mlp_to_json(q->q_target());
    }
    j["agent_n"] = a;
    json in;
    in["kind"] = to_string(controller.intrinsic().kind());
    if (const RndModel* rnd = controller.intrinsic().rnd()) {
        in["target"] = mlp_to_json(rnd->target());
        in["predictor"] = mlp_to_json(rnd->predictor());
        in["stats"] = stats_to_json(rnd->stats());
    }
    j["intrinsic"] = in;

    std::ofstream f(path);
    if (!f) throw std::runtime_error("cannot write checkpoint '" + path + "'");
    f << j.dump() << '\n';
    if (!f) throw std::runtime_error("write failed for checkpoint '" + path + "'");
}

LoadedCheckpoint load_checkpoint(const std::string& path) {
    std::ifstream f(path);
    if (!f) throw std::runtime_error("cannot open checkpoint '" + path + "'");
    json j;
    try {
        f >> j;
    } catch (const json::exception& e) {
        throw std::runtime_error("checkpoint '" + path + "' is not valid JSON: " + e.what());
    }

    try {
        LoadedCheckpoint out;
        out.config = parse_config(j.at("config").get<std::string>());
        out.seed = j.at("seed").get<std::uint64_t>();
        out.env = make_environment(out.config.env, out.seed);
        const int obs = out.env->observation_size();
        const int actions = out.env->action_count();

        const json& a = j.at("agent_n");
        out.agent = make_learner(out.config.agent, obs, actions, derive_seed(out.seed, 1));
        if (auto* sac = dynamic_cast<SacAgent*>(out.agent.get())) {
            sac->set_policy(mlp_from_json(a.at("policy")));
        } else if (auto* q = dynamic_cast<QAgent*>(out.agent.get())) {
            q->set_q(mlp_from_json(a.at("q")), mlp_from_json(a.at("q_target")));
        }

        out.intrinsic = make_intrinsic(out.config.intrinsic, obs, derive_seed(out.seed, 3));
        if (RndModel* rnd = mutable_rnd(*out.intrinsic)) {
            const json& in = j.at("intrinsic");
            rnd->set_target(mlp_from_json(in.at("target")));
            rnd->set_predictor(mlp_from_json(in.at("predictor")));
            rnd->set_stats(stats_from_json(in.at("stats")));
        }
        return out;
    } catch (const json::exception& e) {
        throw std::runtime_error("checkpoint '" + path + "' is malformed: " + e.what());
    }
}

}  // namespace kea
