#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace kea {

inline constexpr const char* kMetricsHeader =
    "step,episode,return_mean,return_std,intrinsic_mean,usage_s,entropy_mean,loss_critic,loss_actor";

// One evaluation row. episode is a count, but aggregated files carry cross-seed means.
struct RunRecord {
    std::uint64_t step = 0;
    double episode = 0.0;
    double return_mean = 0.0;
    double return_std = 0.0;
    double intrinsic_mean = 0.0;
    double usage_s = 0.0;
    double entropy_mean = 0.0;
    double loss_critic = 0.0;
    double loss_actor = 0.0;
};

std::string format_metrics_csv(const std::vector<RunRecord>& rows);
void write_metrics_csv(const std::string& path, const std::vector<RunRecord>& rows);

/// Throws std::runtime_error on a missing file, a wrong header or malformed rows.
std::vector<RunRecord> read_metrics_csv(const std::string& path);
std::vector<RunRecord> parse_metrics_csv(const std::string& text, const std::string& origin = "<memory>");

}  // namespace kea
