#include "kea/intrinsic/intrinsic_model.hpp"

#include <algorithm>

#include "kea/core/error.hpp"

namespace kea {

IntrinsicKind parse_intrinsic_kind(const std::string& name) {
    if (name == "none") return IntrinsicKind::none;
    if (name == "rnd") return IntrinsicKind::rnd;
    if (name == "noveld") return IntrinsicKind::noveld;
    if (name == "count") return IntrinsicKind::count;
    throw ConfigError("intrinsic.kind: unknown value '" + name + "'");
}

std::string to_string(IntrinsicKind kind) {
    switch (kind) {
        case IntrinsicKind::none: return "none";
        case IntrinsicKind::rnd: return "rnd";
        case IntrinsicKind::noveld: return "noveld";
        case IntrinsicKind::count: return "count";
    }
    return "none";
}

IntrinsicSignal RndIntrinsic::collect(Transition& t) {
    const double novelty = model_.novelty_from_raw(model_.record(t.next_obs));
    return {model_.config().scale * novelty, novelty};
}

double noveld_combine(double nov_next, double nov_current, double c, bool first_visit) {
    if (!first_visit) return 0.0;
    return std::max(nov_next - c * nov_current, 0.0);
}

double noveld_reward(const RndModel& model, std::span<const double> obs, std::span<const double> next_obs,
                     EpisodicCounter& counter, double c) {
    const bool first = counter.visit(next_obs) == 1;
    return noveld_combine(model.reward(next_obs), model.reward(obs), c, first);
}

NovelDIntrinsic::NovelDIntrinsic(int obs_size, RndConfig config, std::uint64_t seed, double c)
    : model_(obs_size, std::move(config), seed), c_(c) {
    require(c >= 0.0, "noveld: c must be nonnegative");
}

void NovelDIntrinsic::begin_episode(std::span<const double> initial_obs) {
    episode_.reset();
    episode_.visit(initial_obs);
}

IntrinsicSignal NovelDIntrinsic::collect(Transition& t) {
    model_.record(t.next_obs);
    t.first_visit = episode_.visit(t.next_obs) == 1;
    const double score = noveld_combine(model_.novelty(t.next_obs), model_.novelty(t.obs), c_, t.first_visit);
    return {model_.config().scale * score, score};
}

double NovelDIntrinsic::score(const Transition& t) const {
    return model_.config().scale *
           noveld_combine(model_.novelty(t.next_obs), model_.novelty(t.obs), c_, t.first_visit);
}

IntrinsicSignal CountIntrinsic::collect(Transition& t) {
    const double r = count_reward(counter_, t.next_obs);
    return {r, r};
}

double CountIntrinsic::state_reward(std::span<const double> obs) const {
    const auto n = counter_.count(obs);
    return n == 0 ? 1.0 : 1.0 / static_cast<double>(n);
}

std::unique_ptr<IntrinsicModel> make_intrinsic(const IntrinsicConfig& config, int obs_size, std::uint64_t seed) {
    switch (config.kind) {
        case IntrinsicKind::none: return std::make_unique<NoIntrinsic>();
        case IntrinsicKind::rnd: return std::make_unique<RndIntrinsic>(obs_size, config.rnd, seed);
        case IntrinsicKind::noveld: return std::make_unique<NovelDIntrinsic>(obs_size, config.rnd, seed, config.noveld_c);
        case IntrinsicKind::count: return std::make_unique<CountIntrinsic>();
    }
    throw ConfigError("intrinsic.kind: unsupported");
}

}  // namespace kea
