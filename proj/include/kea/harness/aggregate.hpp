#pragma once

#include <string>
#include <vector>

#include "kea/harness/metrics.hpp"

namespace kea {

/**
 * Cross-seed summary per evaluation step: return_mean and return_std are the mean and
 * population std of the per-seed return_mean; every other column is the plain mean.
 * Each column is summed in sorted order, so the result does not depend on seed order.
 * Throws std::runtime_error listing the files whose step column differs from the first.
 */
std::vector<RunRecord> aggregate_runs(const std::vector<std::vector<RunRecord>>& runs,
                                      const std::vector<std::string>& names = {});

/// Accepts run directories (reads <dir>/metrics.csv) or CSV paths directly.
std::vector<RunRecord> aggregate_dirs(const std::vector<std::string>& paths);

}  // namespace kea
