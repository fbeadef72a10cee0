#pragma once

#include <cstdint>

#include "kea/tensor/mlp.hpp"

namespace kea {

struct AdamConfig {
    double beta1 = 0.9;
    double beta2 = 0.999;
    double epsilon = 1e-8;
};

/// Per-parameter Adam moments, shaped like the network they optimize.
struct AdamState {
    MlpParams first_moment;
    MlpParams second_moment;
    std::uint64_t step_count = 0;
    AdamConfig config;
};

AdamState make_adam(const MlpParams& params, AdamConfig config = {});

/**
 * One bias-corrected Adam update of params in place; increments state.step_count.
 * Throws NumericError naming the layer when a gradient entry is not finite; params and
 * state are left untouched in that case.
 */
void adam_step(MlpParams& params, AdamState& state, const MlpGrads& grads, double lr);

}  // namespace kea
