#include "kea/env/deepsea.hpp"

#include <algorithm>

#include "kea/core/error.hpp"

namespace kea {

void DeepSeaConfig::validate() const {
    require(size >= 2, "deepsea: size must be at least 2");
    require(unscaled_move_cost >= 0.0, "deepsea: move cost must be nonnegative");
}

std::vector<double> deepsea_observe(int size, int row, int column) {
    require(row >= 0 && row < size && column >= 0 && column < size, "deepsea_observe: cell outside the grid");
    std::vector<double> obs(static_cast<std::size_t>(size * size), 0.0);
    obs[static_cast<std::size_t>(row * size + column)] = 1.0;
    return obs;
}

DeepSea::DeepSea(DeepSeaConfig config) : config_(config) {
    config_.validate();
    const auto cells = static_cast<std::size_t>(config_.size * config_.size);
    right_action_.assign(cells, 1);
    if (!config_.identity_action_map) {
        Rng rng = make_rng(config_.action_map_seed, 0xDEE95EA);
        for (auto& a : right_action_) {
            a = static_cast<std::uint8_t>(uniform01(rng) < 0.5 ? 0 : 1);
        }
    }
}

int DeepSea::right_action(int row, int column) const {
    return right_action_[static_cast<std::size_t>(row * config_.size + column)];
}

std::vector<double> DeepSea::observe(int row, int column) const { return deepsea_observe(config_.size, row, column); }

EnvStep DeepSea::reset(Rng& /*rng*/) {
    row_ = 0;
    column_ = 0;
    done_ = false;
    return EnvStep{observe(0, 0), 0.0, false, false};
}

EnvStep DeepSea::step(int action) {
    require(!done_, "deepsea: step after episode end");
    require(action == 0 || action == 1, "deepsea: action must be 0 or 1");
    const int n = config_.size;
    EnvStep out;
    const bool go_right = action == right_action(row_, column_);
    if (go_right) {
        if (column_ == n - 1 && row_ == n - 1) {
            out.reward_ext += config_.goal_reward;
        }
        out.reward_ext -= config_.move_cost();
        column_ = std::min(column_ + 1, n - 1);
    } else {
        column_ = std::max(column_ - 1, 0);
    }
    row_ += 1;
    if (row_ == n) {
        out.terminated = true;
        out.observation.assign(static_cast<std::size_t>(n * n), 0.0);
    } else {
        out.observation = observe(row_, column_);
    }
    done_ = out.terminated;
    return out;
}

}  // namespace kea
