#pragma once

#include <cstdint>
#include <vector>

#include "kea/env/environment.hpp"

namespace kea {

struct DeepSeaConfig {
    int size = 10;
    std::uint64_t action_map_seed = 0;
    // Identity map: action 1 always moves right.
    bool identity_action_map = false;
    double unscaled_move_cost = 0.01;
    double goal_reward = 1.0;

    double move_cost() const { return unscaled_move_cost / size; }
    void validate() const;
};

/**
 * N x N deep-sea chain. Every step descends one row and shifts left or right; a per-cell
 * action map decides which action index means "right". Right moves cost 0.01/N, moving
 * right from the bottom-right cell pays the goal reward, and the episode terminates after
 * exactly N steps. Observations are one-hot over the N^2 cells; the terminal observation
 * (row N, below the grid) is all zeros.
 */
class DeepSea : public Environment {
public:
    explicit DeepSea(DeepSeaConfig config = {});

    std::string name() const override { return "deepsea"; }
    int observation_size() const override { return config_.size * config_.size; }
    int action_count() const override { return 2; }

    EnvStep reset(Rng& rng) override;
    EnvStep step(int action) override;

    std::vector<double> observe(int row, int column) const;
    /// Action index that moves right in the given cell.
    int right_action(int row, int column) const;

    int row() const { return row_; }
    int column() const { return column_; }
    const DeepSeaConfig& config() const { return config_; }

private:
    DeepSeaConfig config_;
    std::vector<std::uint8_t> right_action_;
    int row_ = 0;
    int column_ = 0;
    bool done_ = true;
};

/// One-hot encoding of (row, column) on an N x N grid.
std::vector<double> deepsea_observe(int size, int row, int column);

}  // namespace kea
