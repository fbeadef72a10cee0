#include "kea/harness/aggregate.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <stdexcept>

namespace kea {

namespace {

double sorted_mean(std::vector<double> xs) {
    std::sort(xs.begin(), xs.end());
    double s = 0.0;
    for (double x : xs) s += x;
    return s / static_cast<double>(xs.size());
}

double population_std(const std::vector<double>& xs, double mean) {
    std::vector<double> sq;
    sq.reserve(xs.size());
    for (double x : xs) sq.push_back((x - mean) * (x - mean));
    return std::sqrt(sorted_mean(std::move(sq)));
}

}  // namespace

std::vector<RunRecord> aggregate_runs(const std::vector<std::vector<RunRecord>>& runs,
                                      const std::vector<std::string>& names) {
    if (runs.empty()) throw std::runtime_error("aggregate: no runs given");
    auto name_of = [&](std::size_t i) { return i < names.size() ? names[i] : "run " + std::to_string(i); };

    const auto& ref = runs.front();
    if (ref.empty()) throw std::runtime_error("aggregate: " + name_of(0) + " has no rows");
    std::vector<std::string> bad;
    for (std::size_t i = 1; i < runs.size(); ++i) {
        bool aligned = runs[i].size() == ref.size();
        for (std::size_t r = 0; aligned && r < ref.size(); ++r) aligned = runs[i][r].step == ref[r].step;
        if (!aligned) bad.push_back(name_of(i));
    }
    if (!bad.empty()) {
        std::string msg = "aggregate: step columns differ from " + name_of(0) + " in:";
        for (const auto& b : bad) msg += " " + b;
        throw std::runtime_error(msg);
    }

    std::vector<RunRecord> out(ref.size());
    std::vector<double> col(runs.size());
    auto column_mean = [&](std::size_t r, auto field) {
        for (std::size_t i = 0; i < runs.size(); ++i) col[i] = runs[i][r].*field;
        return sorted_mean(col);
    };
    for (std::size_t r = 0; r < ref.size(); ++r) {
        RunRecord& o = out[r];
        o.step = ref[r].step;
        o.episode = column_mean(r, &RunRecord::episode);
        o.return_mean = column_mean(r, &RunRecord::return_mean);
        o.return_std = population_std(col, o.return_mean);
        o.intrinsic_mean = column_mean(r, &RunRecord::intrinsic_mean);
        o.usage_s = column_mean(r, &RunRecord::usage_s);
        o.entropy_mean = column_mean(r, &RunRecord::entropy_mean);
        o.loss_critic = column_mean(r, &RunRecord::loss_critic);
        o.loss_actor = column_mean(r, &RunRecord::loss_actor);
    }
    return out;
}

std::vector<RunRecord> aggregate_dirs(const std::vector<std::string>& paths) {
    std::vector<std::vector<RunRecord>> runs;
    std::vector<std::string> names;
    for (const auto& p : paths) {
        const std::filesystem::path path(p);
        const std::string csv = std::filesystem::is_directory(path) ? (path / "metrics.csv").string() : p;
        runs.push_back(read_metrics_csv(csv));
        names.push_back(csv);
    }
    return aggregate_runs(runs, names);
}

}  // namespace kea
