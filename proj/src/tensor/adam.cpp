#include "kea/tensor/adam.hpp"

#include <cmath>
#include <string>

#include "kea/core/error.hpp"

namespace kea {

AdamState make_adam(const MlpParams& params, AdamConfig config) {
    require(config.beta1 > 0.0 && config.beta1 < 1.0, "adam beta1 must lie in (0,1)");
    require(config.beta2 > 0.0 && config.beta2 < 1.0, "adam beta2 must lie in (0,1)");
    require(config.epsilon > 0.0 && config.epsilon <= 1e-3, "adam epsilon must lie in (0,1e-3]");
    return AdamState{zeros_like(params), zeros_like(params), 0, config};
}

namespace {

template <typename Param, typename Moment>
void update_block(Param& p, Moment& m, Moment& v, const Param& g, double beta1, double beta2, double step_size,
                  double bias2, double eps) {
    m = beta1 * m + (1.0 - beta1) * g;
    v = beta2 * v + (1.0 - beta2) * g.cwiseProduct(g);
    p.array() -= step_size * m.array() / ((v.array() / bias2).sqrt() + eps);
}

}  // namespace

void adam_step(MlpParams& params, AdamState& state, const MlpGrads& grads, double lr) {
    require(lr > 0.0, "adam_step: learning rate must be positive");
    require_same_shape(params, grads, "adam_step");
    require_same_shape(params, state.first_moment, "adam_step");
    for (std::size_t l = 0; l < grads.num_layers(); ++l) {
        if (!grads.weights[l].allFinite() || !grads.biases[l].allFinite()) {
            throw NumericError("adam_step: non-finite gradient in layer " + std::to_string(l));
        }
    }
    state.step_count += 1;
    const double t = static_cast<double>(state.step_count);
    const auto& cfg = state.config;
    const double bias1 = 1.0 - std::pow(cfg.beta1, t);
    const double bias2 = 1.0 - std::pow(cfg.beta2, t);
    const double step_size = lr / bias1;
    for (std::size_t l = 0; l < params.num_layers(); ++l) {
        update_block(params.weights[l], state.first_moment.weights[l], state.second_moment.weights[l],
                     grads.weights[l], cfg.beta1, cfg.beta2, step_size, bias2, cfg.epsilon);
        update_block(params.biases[l], state.first_moment.biases[l], state.second_moment.biases[l],
                     grads.biases[l], cfg.beta1, cfg.beta2, step_size, bias2, cfg.epsilon);
    }
}

}  // namespace kea
