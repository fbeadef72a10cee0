#pragma once

#include "kea/env/environment.hpp"

namespace kea {

enum class MdpState : int { s0 = 0, s1 = 1, s2 = 2 };

// Single-step MDP: from s0, a1 (index 0) leads to s1 and a2 (index 1) to s2. No extrinsic reward.
class ThreeStateMdp : public Environment {
public:
    std::string name() const override { return "mdp3"; }
    int observation_size() const override { return 3; }
    int action_count() const override { return 2; }

    EnvStep reset(Rng& rng) override;
    EnvStep step(int action) override;

    MdpState state() const { return state_; }

    static std::vector<double> observe(MdpState s);

private:
    MdpState state_ = MdpState::s0;
    bool done_ = true;
};

/// Transition function of the three-state MDP.
EnvStep mdp3_step(MdpState state, int action);

}  // namespace kea
