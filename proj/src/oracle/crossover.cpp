#include "kea/oracle/crossover.hpp"

#include <cmath>
#include <limits>

#include "kea/core/error.hpp"
#include "kea/env/three_state.hpp"
#include "kea/intrinsic/counters.hpp"
#include "kea/tensor/categorical.hpp"

namespace kea {

double CrossoverParams::denominator() const {
    return (1.0 - gamma) * eps - gamma * alpha * std::log(2.0);
}

void CrossoverParams::validate() const {
    require(std::isfinite(beta) && std::isfinite(gamma) && std::isfinite(alpha) && std::isfinite(eps),
            "crossover: parameters must be finite");
    require(beta > 0.0, "crossover: beta must be positive");
    require(gamma >= 0.0 && gamma < 1.0, "crossover: gamma must lie in [0,1)");
    require(alpha > 0.0, "crossover: alpha must be positive");
}

std::optional<double> k_star(const CrossoverParams& p) {
    p.validate();
    const double d = p.denominator();
    if (!(d > 0.0)) return std::nullopt;
    return p.beta / d;
}

EtaRatio eta_ratio(double q1, double q2, double alpha) {
    require(alpha > 0.0, "eta_ratio: alpha must be positive");
    EtaRatio out;
    out.log_ratio = (q1 - q2) / alpha;
    if (out.log_ratio < std::log(std::numeric_limits<double>::max())) {
        out.ratio = std::exp(out.log_ratio);
    }
    return out;
}

double soft_value(const std::vector<double>& q, double alpha) {
    require(alpha > 0.0, "soft_value: alpha must be positive");
    Vector logits(static_cast<Eigen::Index>(q.size()));
    for (std::size_t i = 0; i < q.size(); ++i) logits(static_cast<Eigen::Index>(i)) = q[i] / alpha;
    const Categorical pi = categorical_from_logits(logits);
    double v = 0.0;
    for (std::size_t i = 0; i < q.size(); ++i) {
        const auto a = static_cast<Eigen::Index>(i);
        v += pi.probs(a) * (q[i] - alpha * pi.log_probs(a));
    }
    return v;
}

CrossoverSimulation simulate_crossover(const CrossoverParams& p, std::uint64_t max_k) {
    p.validate();
    require(max_k >= 1, "simulate_crossover: max_k must be at least 1");
    // s1 keeps its initial Q-values, so its soft value stays at the uniform-policy value.
    const double v_s1 = soft_value({p.eps, p.eps}, p.alpha);
    const double q_a2 = p.eps;
    const auto s1 = ThreeStateMdp::observe(MdpState::s1);
    VisitCounter visits;
    CrossoverSimulation sim;
    for (std::uint64_t k = 1; k <= max_k; ++k) {
        CrossoverStep row;
        row.k = k;
        row.r_int = count_reward(visits, s1);
        row.q_a1 = p.beta * row.r_int + p.gamma * v_s1;
        row.q_a2 = q_a2;
        row.eta = eta_ratio(row.q_a1, row.q_a2, p.alpha);
        sim.trace.push_back(row);
        if (row.eta.log_ratio <= 0.0) {
            sim.k_sim = k;
            break;
        }
    }
    return sim;
}

}  // namespace kea
