#include "kea/replay/recompute.hpp"

#include "kea/core/error.hpp"

namespace kea {

std::vector<ScoredTransition> recompute_intrinsic(const std::vector<const Transition*>& batch,
                                                  const IntrinsicModel& model) {
    std::vector<ScoredTransition> out;
    out.reserve(batch.size());
    const RndModel* rnd = model.rnd();
    for (const Transition* t : batch) {
        require(t != nullptr, "recompute_intrinsic: null transition");
        if (rnd != nullptr) {
            require(static_cast<int>(t->next_obs.size()) == rnd->obs_size(),
                    "recompute_intrinsic: observation shape does not match the intrinsic model");
        }
        out.push_back({t, model.score(*t)});
    }
    return out;
}

}  // namespace kea
