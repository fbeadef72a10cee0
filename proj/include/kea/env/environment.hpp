#pragma once

#include <memory>
#include <string>
#include <vector>

#include "kea/core/rng.hpp"

namespace kea {

struct EnvStep {
    std::vector<double> observation;
    double reward_ext = 0.0;
    bool terminated = false;
    bool truncated = false;

    bool done() const { return terminated || truncated; }
};

// Single-owner episodic environment with a discrete action space.
class Environment {
public:
    virtual ~Environment() = default;

    virtual std::string name() const = 0;
    virtual int observation_size() const = 0;
    virtual int action_count() const = 0;

    virtual EnvStep reset(Rng& rng) = 0;
    /// Throws ContractViolation when called after the episode ended or with an invalid action.
    virtual EnvStep step(int action) = 0;
};

}  // namespace kea
