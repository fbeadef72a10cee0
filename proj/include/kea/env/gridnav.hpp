#pragma once

#include <vector>

#include "kea/env/environment.hpp"

namespace kea {

struct GridCell {
    int x = 0;  // column
    int y = 0;  // row, 0 at the top
    friend bool operator==(const GridCell&, const GridCell&) = default;
};

struct GridNavConfig {
    int width = 41;
    int height = 41;
    int obstacle_width = 4;
    int obstacle_height = 34;
    GridCell goal{40, 10};
    int max_steps = 100;
    // When false the goal cell is an ordinary free cell and no reward is ever emitted.
    bool goal_active = true;

    // Centered obstacle rectangle, inclusive bounds.
    int obstacle_x0() const { return (width - obstacle_width) / 2; }
    int obstacle_y0() const { return (height - obstacle_height) / 2; }
    int obstacle_x1() const { return obstacle_x0() + obstacle_width - 1; }
    int obstacle_y1() const { return obstacle_y0() + obstacle_height - 1; }

    bool in_grid(GridCell c) const { return c.x >= 0 && c.x < width && c.y >= 0 && c.y < height; }
    bool in_obstacle(GridCell c) const {
        return c.x >= obstacle_x0() && c.x <= obstacle_x1() && c.y >= obstacle_y0() && c.y <= obstacle_y1();
    }

    void validate() const;
};

enum class GridAction : int { right = 0, left = 1, up = 2, down = 3 };

/**
 * 2D navigation gridworld: sparse reward at the goal, episode ends on goal, boundary exit
 * or obstacle collision, truncated after max_steps. Starts are uniform over valid cells of
 * the left half (x < width / 2). Observation is (x, y) scaled to [0, 1]^2.
 */
class GridNav : public Environment {
public:
    explicit GridNav(GridNavConfig config = {});

    std::string name() const override { return "gridnav"; }
    int observation_size() const override { return 2; }
    int action_count() const override { return 4; }

    EnvStep reset(Rng& rng) override;
    EnvStep step(int action) override;

    /// Places the agent at a specific valid cell and starts a fresh episode there.
    EnvStep reset_to(GridCell cell);

    const GridNavConfig& config() const { return config_; }
    GridCell position() const { return position_; }
    const std::vector<GridCell>& start_cells() const { return start_cells_; }

    std::vector<double> observe(GridCell cell) const;

private:
    GridNavConfig config_;
    std::vector<GridCell> start_cells_;
    GridCell position_;
    int steps_ = 0;
    bool done_ = true;
};

}  // namespace kea
