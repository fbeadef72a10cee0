#include "kea/env/three_state.hpp"

#include "kea/core/error.hpp"

namespace kea {

std::vector<double> ThreeStateMdp::observe(MdpState s) {
    std::vector<double> obs(3, 0.0);
    obs[static_cast<std::size_t>(s)] = 1.0;
    return obs;
}

EnvStep mdp3_step(MdpState state, int action) {
    require(state == MdpState::s0, "mdp3: actions are only defined in s0");
    require(action == 0 || action == 1, "mdp3: action must be a1 (0) or a2 (1)");
    const MdpState next = action == 0 ? MdpState::s1 : MdpState::s2;
    return EnvStep{ThreeStateMdp::observe(next), 0.0, true, false};
}

EnvStep ThreeStateMdp::reset(Rng& /*rng*/) {
    state_ = MdpState::s0;
    done_ = false;
    return EnvStep{observe(state_), 0.0, false, false};
}

EnvStep ThreeStateMdp::step(int action) {
    require(!done_, "mdp3: step after episode end");
    EnvStep out = mdp3_step(state_, action);
    state_ = action == 0 ? MdpState::s1 : MdpState::s2;
    done_ = true;
    return out;
}

}  // namespace kea
