#pragma once

#include <string>
#include <vector>

#include "kea/agents/learner.hpp"
#include "kea/env/environment.hpp"
#include "kea/harness/metrics.hpp"
#include "kea/intrinsic/intrinsic_model.hpp"

namespace kea {

/// Learning curve of return_mean against step with a +-1 std band. Throws on empty input.
std::string render_plot(const std::vector<RunRecord>& rows, const std::string& title = "");

/// Reads a metrics CSV and writes the plot next to it (or to svg_path when given). Returns the SVG path.
std::string emit_plot(const std::string& csv_path, const std::string& svg_path = "");

struct HeatmapSvgs {
    std::string intrinsic;
    std::string entropy;
};

/**
 * Per-cell intrinsic reward and A^N policy entropy over every free gridnav cell, one
 * rect with class "cell" each. Obstacle cells are masked. Throws ContractViolation for
 * environments other than gridnav.
 */
HeatmapSvgs render_heatmaps(const Learner& agent, const IntrinsicModel& intrinsic, const Environment& env);

/// Writes intrinsic.svg and entropy.svg into out_dir.
void emit_heatmaps(const Learner& agent, const IntrinsicModel& intrinsic, const Environment& env,
                   const std::string& out_dir);

}  // namespace kea
