#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <regex>
#include <sstream>

#include <boost/property_tree/ptree.hpp>
#include <boost/property_tree/xml_parser.hpp>

#include "kea/agents/sac.hpp"
#include "kea/core/error.hpp"
#include "kea/env/deepsea.hpp"
#include "kea/harness/aggregate.hpp"
#include "kea/harness/checkpoint.hpp"
#include "kea/harness/config.hpp"
#include "kea/harness/experiment.hpp"
#include "kea/harness/metrics.hpp"
#include "kea/harness/svg.hpp"

using namespace kea;
namespace fs = std::filesystem;

namespace {

fs::path scratch(const std::string& name) {
    const fs::path p = fs::temp_directory_path() / ("kea_test_" + name);
    fs::remove_all(p);
    fs::create_directories(p);
    return p;
}

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::ostringstream s;
    s << in.rdbuf();
    return s.str();
}

const char* kTinyConfig = R"(
env.name = gridnav
agent.hidden = 16,16
agent.beta_ext = 100
intrinsic.kind = rnd
intrinsic.hidden = 8
intrinsic.embed_dim = 8
train.total_steps = 383
train.warmup_samples = 64
train.batch_size = 64
train.utd_agent = 48
train.utd_intrinsic = 32
eval.every = 200
eval.episodes = 2
run.checkpoint = false
)";

RunRecord row(std::uint64_t step, double ret) {
    RunRecord r;
    r.step = step;
    r.return_mean = ret;
    return r;
}

int run_cli(const std::string& args) {
    const std::string cmd = std::string(KEA_CLI_PATH) + " " + args + " >/dev/null 2>&1";
    const int status = std::system(cmd.c_str());
    return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

}  // namespace

TEST(Config, UnknownKeyIsNamed) {
    try {
        parse_config("agent.alhpa = 0.3\n");
        FAIL();
    } catch (const ConfigError& e) {
        EXPECT_NE(std::string(e.what()).find("agent.alhpa"), std::string::npos);
    }
    try {
        parse_config("train.batch_size = many\n");
        FAIL();
    } catch (const ConfigError& e) {
        EXPECT_NE(std::string(e.what()).find("train.batch_size"), std::string::npos);
    }
    EXPECT_THROW(parse_config("env.name = atari\n"), ConfigError);
    EXPECT_THROW(load_config("/nonexistent/config.cfg"), ConfigError);
}

TEST(Config, CanonicalRoundTrip) {
    const ExperimentConfig a = parse_config(kTinyConfig);
    const ExperimentConfig b = parse_config(canonical_config(a));
    EXPECT_EQ(canonical_config(a), canonical_config(b));
    EXPECT_EQ(config_hash(a), config_hash(b));
    EXPECT_EQ(config_hash(a).size(), 16u);
    ExperimentConfig c = a;
    apply_config_value(c, "kea.sigma", "0.75");
    EXPECT_NE(config_hash(a), config_hash(c));
}

TEST(Config, ShippedConfigsParse) {
    for (const auto& entry : fs::directory_iterator(KEA_CONFIG_DIR)) {
        if (entry.path().extension() != ".cfg") continue;
        EXPECT_NO_THROW(load_config(entry.path().string())) << entry.path();
    }
}

TEST(Metrics, HeaderAndRoundTrip) {
    std::vector<RunRecord> rows{row(10, 0.25), row(20, 0.5)};
    rows[1].usage_s = 0.125;
    const std::string text = format_metrics_csv(rows);
    EXPECT_EQ(text.substr(0, text.find('\n')),
              "step,episode,return_mean,return_std,intrinsic_mean,usage_s,entropy_mean,loss_critic,loss_actor");
    const auto back = parse_metrics_csv(text);
    ASSERT_EQ(back.size(), 2u);
    EXPECT_EQ(back[1].step, 20u);
    EXPECT_EQ(back[1].return_mean, 0.5);
    EXPECT_EQ(back[1].usage_s, 0.125);
    EXPECT_THROW(parse_metrics_csv("step,episode\n1,2\n"), std::runtime_error);
}

TEST(Run, UtdAccounting) {
    const ExperimentConfig cfg = parse_config(kTinyConfig);
    const SeedRun r = run_seed(cfg, 0);
    EXPECT_EQ(r.steps, 383u);
    // Warm at step 64, so 320 post-warmup steps at 48 updates per 32 steps.
    EXPECT_EQ(r.agent_updates, 480u);
    EXPECT_EQ(r.intrinsic_updates, 383u);
    ASSERT_EQ(r.records.size(), 2u);
    EXPECT_EQ(r.records[0].step, 200u);
    EXPECT_EQ(r.records[1].step, 383u);
}

TEST(Run, SameSeedSameBytes) {
    const ExperimentConfig cfg = parse_config(kTinyConfig);
    const fs::path a = scratch("det_a");
    const fs::path b = scratch("det_b");
    run_seed(cfg, 3, a.string());
    run_seed(cfg, 3, b.string());
    const std::string ca = slurp(a / "metrics.csv");
    EXPECT_FALSE(ca.empty());
    EXPECT_EQ(ca, slurp(b / "metrics.csv"));
}

TEST(Run, ExperimentWritesManifestAndCheckpoint) {
    ExperimentConfig cfg = parse_config(kTinyConfig);
    cfg.seeds = {0, 1};
    cfg.checkpoint = true;
    cfg.workers = 2;
    const fs::path out = scratch("experiment");
    const ExperimentResult res = run_experiment(cfg, out.string());
    ASSERT_EQ(res.runs.size(), 2u);
    EXPECT_TRUE(fs::exists(out / "seed_0" / "metrics.csv"));
    EXPECT_TRUE(fs::exists(out / "seed_1" / "checkpoint.json"));
    EXPECT_NE(slurp(res.manifest_path).find(config_hash(cfg)), std::string::npos);

    const LoadedCheckpoint ck = load_checkpoint((out / "seed_1" / "checkpoint.json").string());
    EXPECT_EQ(ck.seed, 1u);
    const std::vector<double> obs{0.3, 0.7};
    const auto live = build_controller(cfg, 1);  // fresh, untrained: parameters must differ from the snapshot
    EXPECT_EQ(ck.agent->obs_size(), 2);
    EXPECT_NE(ck.agent->parameter_checksum(), live->agent_n().parameter_checksum());
}

TEST(Run, OutputDirectoryResolution) {
    ExperimentConfig cfg;
    EXPECT_EQ(resolve_out_dir(cfg, "cli"), "cli");
    cfg.out_dir = "cfg";
    EXPECT_EQ(resolve_out_dir(cfg, ""), "cfg");
    cfg.out_dir.clear();
    setenv("KEA_OUT_DIR", "/tmp/env_root", 1);
    EXPECT_EQ(resolve_out_dir(cfg, ""), "/tmp/env_root");
    unsetenv("KEA_OUT_DIR");
    EXPECT_EQ(resolve_out_dir(cfg, ""), "runs");
}

TEST(Evaluate, DeepSeaAlwaysRightIsExact) {
    EnvConfig env;
    env.name = "deepsea";
    env.size = 10;
    env.identity_map = true;
    SacConfig sc;
    sc.hidden = {4};
    SacAgent agent(100, 2, sc, 0);
    MlpParams p = zeros_like(agent.policy());
    p.biases.back() << 0.0, 10.0;
    agent.set_policy(p);
    Rng rng(1);
    const EvalResult r = evaluate(agent, [&] { return make_environment(env, 0); }, 5, rng);
    EXPECT_EQ(r.return_mean, 1.0 - 0.01);
    EXPECT_EQ(r.return_std, 0.0);
    const EvalResult one = evaluate(agent, [&] { return make_environment(env, 0); }, 1, rng, ActMode::sample);
    EXPECT_EQ(one.return_std, 0.0);
}

TEST(Factories, UnknownNamesRejected) {
    EnvConfig env;
    env.name = "pong";
    EXPECT_THROW(make_environment(env, 0), ConfigError);
    AgentConfig agent;
    agent.variant = "ppo";
    EXPECT_THROW(make_learner(agent, 2, 4, 0), ConfigError);
}

TEST(Aggregate, TwoRunHandCase) {
    const auto out = aggregate_runs({{row(100, 0.2)}, {row(100, 0.4)}});
    ASSERT_EQ(out.size(), 1u);
    EXPECT_NEAR(out[0].return_mean, 0.3, 1e-15);
    EXPECT_NEAR(out[0].return_std, 0.1, 1e-15);
}

TEST(Aggregate, MatchesRecomputationAndIsOrderFree) {
    Rng rng(4);
    std::vector<std::vector<RunRecord>> runs(5);
    for (auto& r : runs) {
        for (std::uint64_t s = 1; s <= 4; ++s) {
            RunRecord x = row(s * 1000, uniform01(rng));
            x.usage_s = uniform01(rng);
            r.push_back(x);
        }
    }
    const auto out = aggregate_runs(runs);
    for (std::size_t i = 0; i < 4; ++i) {
        double mean = 0.0;
        double usage = 0.0;
        for (const auto& r : runs) {
            mean += r[i].return_mean;
            usage += r[i].usage_s;
        }
        mean /= 5.0;
        double var = 0.0;
        for (const auto& r : runs) var += (r[i].return_mean - mean) * (r[i].return_mean - mean);
        EXPECT_NEAR(out[i].return_mean, mean, 1e-14);
        EXPECT_NEAR(out[i].return_std, std::sqrt(var / 5.0), 1e-14);
        EXPECT_NEAR(out[i].usage_s, usage / 5.0, 1e-14);
        EXPECT_EQ(out[i].step, runs[0][i].step);
    }
    auto shuffled = runs;
    std::reverse(shuffled.begin(), shuffled.end());
    std::swap(shuffled[0], shuffled[2]);
    const auto again = aggregate_runs(shuffled);
    for (std::size_t i = 0; i < 4; ++i) {
        EXPECT_EQ(again[i].return_mean, out[i].return_mean);
        EXPECT_EQ(again[i].return_std, out[i].return_std);
    }
}

TEST(Aggregate, MisalignedStepsNameTheFile) {
    try {
        aggregate_runs({{row(10, 0.0), row(20, 0.0)}, {row(10, 0.0), row(30, 0.0)}}, {"a.csv", "b.csv"});
        FAIL();
    } catch (const std::runtime_error& e) {
        EXPECT_NE(std::string(e.what()).find("b.csv"), std::string::npos);
    }
    EXPECT_THROW(aggregate_runs({}), std::runtime_error);
}

TEST(Plot, SvgStructure) {
    std::vector<RunRecord> rows;
    for (int i = 1; i <= 10; ++i) {
        RunRecord r = row(static_cast<std::uint64_t>(i) * 1000, 0.05 * i);
        r.return_std = 0.02;
        rows.push_back(r);
    }
    const std::string svg = render_plot(rows, "curve");
    std::istringstream in(svg);
    boost::property_tree::ptree tree;
    ASSERT_NO_THROW(boost::property_tree::read_xml(in, tree));
    EXPECT_EQ(tree.count("svg"), 1u);
    const auto count = [&](const std::string& needle) {
        std::size_t n = 0;
        for (std::size_t p = svg.find(needle); p != std::string::npos; p = svg.find(needle, p + 1)) ++n;
        return n;
    };
    EXPECT_EQ(count("<polygon class=\"band\""), 1u);
    EXPECT_EQ(count("<polyline class=\"mean\""), 1u);
    EXPECT_EQ(count("class=\"axis\""), 2u);
    EXPECT_NE(svg.find(">step<"), std::string::npos);
    EXPECT_NE(svg.find(">mean episodic return<"), std::string::npos);
    EXPECT_THROW(render_plot({}), std::runtime_error);
}

TEST(Plot, EmptyCsvRejected) {
    const fs::path dir = scratch("plot_empty");
    std::ofstream(dir / "metrics.csv") << "step,episode,return_mean,return_std,intrinsic_mean,usage_s,entropy_mean,loss_critic,loss_actor\n";
    EXPECT_THROW(emit_plot((dir / "metrics.csv").string()), std::runtime_error);
}

TEST(Heatmap, OneCellPerFreeStateAndUniformEntropy) {
    ExperimentConfig cfg = parse_config(kTinyConfig);
    auto ctrl = build_controller(cfg, 0);
    auto& agent = dynamic_cast<SacAgent&>(ctrl->mutable_agent_n());
    agent.set_policy(zeros_like(agent.policy()));
    const HeatmapSvgs maps = render_heatmaps(ctrl->agent_n(), ctrl->intrinsic(), ctrl->env());
    for (const std::string* svg : {&maps.intrinsic, &maps.entropy}) {
        std::istringstream in(*svg);
        boost::property_tree::ptree tree;
        ASSERT_NO_THROW(boost::property_tree::read_xml(in, tree));
        std::size_t cells = 0;
        for (std::size_t p = svg->find("class=\"cell\""); p != std::string::npos; p = svg->find("class=\"cell\"", p + 1)) ++cells;
        EXPECT_EQ(cells, 41u * 41u - 4u * 34u);
        EXPECT_NE(svg->find("class=\"mask\""), std::string::npos);
    }
    const std::regex title(R"(<title>\((\d+),(\d+)\) ([-0-9.eE+]+)</title>)");
    std::size_t checked = 0;
    for (auto it = std::sregex_iterator(maps.entropy.begin(), maps.entropy.end(), title); it != std::sregex_iterator(); ++it) {
        EXPECT_NEAR(std::stod((*it)[3].str()), std::log(4.0), 1e-5);
        ++checked;
    }
    EXPECT_EQ(checked, 1545u);
}

TEST(Heatmap, NonGridEnvironmentRejected) {
    ExperimentConfig cfg = parse_config(kTinyConfig);
    apply_config_value(cfg, "env.name", "deepsea");
    auto ctrl = build_controller(cfg, 0);
    EXPECT_THROW(render_heatmaps(ctrl->agent_n(), ctrl->intrinsic(), ctrl->env()), ContractViolation);
}

TEST(Cli, ExitCodes) {
    const fs::path dir = scratch("cli");
    {
        std::ofstream cfg(dir / "tiny.cfg");
        cfg << kTinyConfig << "train.total_steps = 100\neval.every = 50\nrun.checkpoint = true\n";
    }
    EXPECT_EQ(run_cli("oracle --beta 1 --gamma 0 --alpha 0.1 --eps 0.5"), 0);
    EXPECT_EQ(run_cli("oracle --beta 1 --gamma 0 --alpha -1 --eps 0.5"), 1);
    EXPECT_NE(run_cli("oracle --beta 1"), 0);
    EXPECT_NE(run_cli(""), 0);
    EXPECT_NE(run_cli("run --config /nonexistent.cfg"), 0);
    EXPECT_EQ(run_cli("run --config " + (dir / "tiny.cfg").string() + " --seed 2 --out " + (dir / "out").string()), 0);
    EXPECT_TRUE(fs::exists(dir / "out" / "seed_2" / "metrics.csv"));
    EXPECT_EQ(run_cli("aggregate " + (dir / "out" / "seed_2").string() + " -o " + (dir / "agg.csv").string()), 0);
    EXPECT_EQ(run_cli("plot " + (dir / "agg.csv").string()), 0);
    EXPECT_TRUE(fs::exists(dir / "agg.svg"));
    EXPECT_EQ(run_cli("heatmap --checkpoint " + (dir / "out" / "seed_2" / "checkpoint.json").string()), 0);
    EXPECT_TRUE(fs::exists(dir / "out" / "seed_2" / "entropy.svg"));
    EXPECT_NE(run_cli("heatmap --checkpoint " + (dir / "missing.json").string()), 0);
    EXPECT_NE(run_cli("aggregate " + (dir / "missing").string()), 0);
    {
        std::ofstream bad(dir / "bad.cfg");
        bad << "train.bogus = 1\n";
    }
    EXPECT_EQ(run_cli("run --config " + (dir / "bad.cfg").string()), 1);
}
