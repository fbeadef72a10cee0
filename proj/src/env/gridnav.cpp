#include "kea/env/gridnav.hpp"

#include "kea/core/error.hpp"

namespace kea {

void GridNavConfig::validate() const {
    require(width > 2 && height > 2, "gridnav: grid too small");
    require(obstacle_width > 0 && obstacle_height > 0, "gridnav: obstacle must be nonempty");
    require(obstacle_x0() > 0 && obstacle_x1() < width - 1 && obstacle_y0() > 0 && obstacle_y1() < height - 1,
            "gridnav: obstacle must lie strictly inside the grid");
    require(in_grid(goal), "gridnav: goal outside the grid");
    require(!in_obstacle(goal), "gridnav: goal inside the obstacle");
    require(max_steps > 0, "gridnav: max_steps must be positive");
}

GridNav::GridNav(GridNavConfig config) : config_(config) {
    config_.validate();
    for (int y = 0; y < config_.height; ++y) {
        for (int x = 0; x < config_.width / 2; ++x) {
            const GridCell c{x, y};
            if (!config_.in_obstacle(c) && !(c == config_.goal)) {
                start_cells_.push_back(c);
            }
        }
    }
    require(!start_cells_.empty(), "gridnav: no valid start cells");
}

std::vector<double> GridNav::observe(GridCell cell) const {
    return {static_cast<double>(cell.x) / (config_.width - 1), static_cast<double>(cell.y) / (config_.height - 1)};
}

EnvStep GridNav::reset(Rng& rng) {
    return reset_to(start_cells_[uniform_index(rng, start_cells_.size())]);
}

EnvStep GridNav::reset_to(GridCell cell) {
    require(config_.in_grid(cell) && !config_.in_obstacle(cell) && !(cell == config_.goal),
            "gridnav: reset_to requires a free cell");
    position_ = cell;
    steps_ = 0;
    done_ = false;
    return EnvStep{observe(position_), 0.0, false, false};
}

EnvStep GridNav::step(int action) {
    require(!done_, "gridnav: step after episode end");
    require(action >= 0 && action < 4, "gridnav: action out of range");
    GridCell next = position_;
    switch (static_cast<GridAction>(action)) {
        case GridAction::right: next.x += 1; break;
        case GridAction::left: next.x -= 1; break;
        case GridAction::up: next.y -= 1; break;
        case GridAction::down: next.y += 1; break;
    }
    steps_ += 1;
    EnvStep out;
    if (!config_.in_grid(next)) {
        // The agent stays on its last valid cell.
        out.terminated = true;
    } else {
        position_ = next;
        if (config_.goal_active && next == config_.goal) {
            out.reward_ext = 1.0;
            out.terminated = true;
        } else if (config_.in_obstacle(next)) {
            out.terminated = true;
        }
    }
    if (!out.terminated && steps_ >= config_.max_steps) {
        out.truncated = true;
    }
    out.observation = observe(position_);
    done_ = out.done();
    return out;
}

}  // namespace kea
