#pragma once

#include <vector>

#include "kea/intrinsic/intrinsic_model.hpp"
#include "kea/replay/replay_buffer.hpp"

namespace kea {

struct ScoredTransition {
    const Transition* transition = nullptr;
    double reward_int = 0.0;
};

/// Scores each transition's next_obs with the current intrinsic model. Never mutates the batch or the model.
std::vector<ScoredTransition> recompute_intrinsic(const std::vector<const Transition*>& batch,
                                                  const IntrinsicModel& model);

}  // namespace kea
