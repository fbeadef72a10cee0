// kea: train, aggregate, plot and inspect runs; evaluate the crossover oracle.

#include <cstdio>
#include <exception>
#include <filesystem>
#include <iostream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "kea/core/alloc.hpp"
#include "kea/harness/aggregate.hpp"
#include "kea/harness/checkpoint.hpp"
#include "kea/harness/config.hpp"
#include "kea/harness/experiment.hpp"
#include "kea/harness/svg.hpp"
#include "kea/oracle/crossover.hpp"

namespace {

std::string fmt(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.10g", v);
    return buf;
}

int cmd_run(const std::string& config_path, const std::vector<std::uint64_t>& seeds, const std::string& out) {
    kea::ExperimentConfig cfg = kea::load_config(config_path);
    if (!seeds.empty()) cfg.seeds = seeds;
    const std::string dir = kea::resolve_out_dir(cfg, out);
    const kea::ExperimentResult res = kea::run_experiment(cfg, dir);
    for (const auto& r : res.runs) {
        std::cout << "seed " << r.seed << ": steps=" << r.steps << " episodes=" << r.episodes
                  << " final_return=" << fmt(r.records.back().return_mean) << " usage_s=" << fmt(r.usage_s) << " -> "
                  << r.run_dir << "\n";
    }
    std::cout << "manifest: " << res.manifest_path << "\n";
    return 0;
}

int cmd_aggregate(const std::vector<std::string>& dirs, const std::string& out) {
    const auto rows = kea::aggregate_dirs(dirs);
    if (out.empty()) {
        std::cout << kea::format_metrics_csv(rows);
    } else {
        kea::write_metrics_csv(out, rows);
        std::cout << "wrote " << out << "\n";
    }
    return 0;
}

int cmd_oracle(const kea::CrossoverParams& p, std::uint64_t max_k) {
    p.validate();
    const auto ks = kea::k_star(p);
    const auto sim = kea::simulate_crossover(p, max_k);
    std::cout << "k_star,k_sim\n"
              << (ks ? fmt(*ks) : "none") << ',' << (sim.k_sim ? std::to_string(*sim.k_sim) : "none") << "\n\n"
              << "k,r_int,q_a1,q_a2,log_eta,eta\n";
    for (const auto& s : sim.trace) {
        std::cout << s.k << ',' << fmt(s.r_int) << ',' << fmt(s.q_a1) << ',' << fmt(s.q_a2) << ','
                  << fmt(s.eta.log_ratio) << ',' << (s.eta.ratio ? fmt(*s.eta.ratio) : "inf") << "\n";
    }
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    kea::tune_allocator();
    CLI::App app{"KEA exploration experiments"};
    app.require_subcommand(1);

    std::string config_path;
    std::vector<std::uint64_t> seeds;
    std::string run_out;
    auto* run = app.add_subcommand("run", "Train every configured seed and write metrics.csv per seed");
    run->add_option("--config", config_path, "Config file")->required()->check(CLI::ExistingFile);
    run->add_option("--seed", seeds, "Seed override (repeatable)");
    run->add_option("--out", run_out, "Output root (default: run.out_dir, then $KEA_OUT_DIR, then ./runs)");

    std::vector<std::string> agg_dirs;
    std::string agg_out;
    auto* agg = app.add_subcommand("aggregate", "Cross-seed mean and std per evaluation step");
    agg->add_option("dirs", agg_dirs, "Run directories or metrics CSVs")->required();
    agg->add_option("-o,--out", agg_out, "Output CSV (default: stdout)");

    std::string plot_csv;
    std::string plot_out;
    auto* plot = app.add_subcommand("plot", "Render a metrics CSV as an SVG learning curve");
    plot->add_option("csv", plot_csv, "Metrics CSV")->required();
    plot->add_option("-o,--out", plot_out, "Output SVG (default: CSV path with .svg)");

    std::string ckpt;
    std::string heat_out;
    auto* heat = app.add_subcommand("heatmap", "Intrinsic-reward and entropy maps from a gridnav checkpoint");
    heat->add_option("--checkpoint", ckpt, "checkpoint.json")->required();
    heat->add_option("-o,--out", heat_out, "Output directory (default: checkpoint directory)");

    kea::CrossoverParams cp;
    std::uint64_t max_k = 100000;
    auto* oracle = app.add_subcommand("oracle", "Crossover step k* of the three-state MDP, closed form and simulated");
    oracle->add_option("--beta", cp.beta)->required();
    oracle->add_option("--gamma", cp.gamma)->required();
    oracle->add_option("--alpha", cp.alpha)->required();
    oracle->add_option("--eps", cp.eps)->required();
    oracle->add_option("--max-k", max_k, "Simulation horizon")->capture_default_str()->check(CLI::PositiveNumber);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e);
    }

    try {
        if (*run) return cmd_run(config_path, seeds, run_out);
        if (*agg) return cmd_aggregate(agg_dirs, agg_out);
        if (*plot) {
            std::cout << "wrote " << kea::emit_plot(plot_csv, plot_out) << "\n";
            return 0;
        }
        if (*heat) {
            const auto loaded = kea::load_checkpoint(ckpt);
            const std::string dir =
                heat_out.empty() ? std::filesystem::path(ckpt).parent_path().string() : heat_out;
            kea::emit_heatmaps(*loaded.agent, *loaded.intrinsic, *loaded.env, dir.empty() ? "." : dir);
            std::cout << "wrote intrinsic.svg and entropy.svg to " << (dir.empty() ? "." : dir) << "\n";
            return 0;
        }
        if (*oracle) return cmd_oracle(cp, max_k);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
