#pragma once

#include <cstdint>
#include <memory>
#include <string>

#include "json.hpp"
#include "kea/controller/kea.hpp"
#include "kea/harness/config.hpp"

namespace kea {

nlohmann::json mlp_to_json(const MlpParams& params);
MlpParams mlp_from_json(const nlohmann::json& j);

/// Snapshot of A^N, the intrinsic model and the config that produced them. Not resumable.
void save_checkpoint(const std::string& path, const ExperimentConfig& config, std::uint64_t seed,
                     const KeaController& controller);

struct LoadedCheckpoint {
    ExperimentConfig config;
    std::uint64_t seed = 0;
    std::unique_ptr<Learner> agent;
    std::unique_ptr<IntrinsicModel> intrinsic;
    std::unique_ptr<Environment> env;
};

LoadedCheckpoint load_checkpoint(const std::string& path);

}  // namespace kea
