#pragma once

#include <cstdint>
#include <optional>
#include <vector>

namespace kea {

/**
 * Three-state MDP with a count-based bonus r_int(s1) = 1/N(s1) weighted by beta, discount
 * gamma, entropy temperature alpha and uniform initial Q-values eps. Repeatedly taking a1
 * drives Q(s0, a1) = beta/k + gamma (eps + alpha log 2) toward Q(s0, a2) = eps; the
 * crossover step is where the two action probabilities at s0 become equal again.
 */
struct CrossoverParams {
    double beta = 1.0;
    double gamma = 0.0;
    double alpha = 0.1;
    double eps = 0.5;

    /// (1 - gamma) eps - gamma alpha log 2; a finite crossover requires it to be positive.
    double denominator() const;
    bool has_crossover() const { return denominator() > 0.0; }
    void validate() const;
};

/// beta / ((1 - gamma) eps - gamma alpha log 2), or nullopt (no crossover) when the denominator is <= 0.
std::optional<double> k_star(const CrossoverParams& p);

struct EtaRatio {
    double log_ratio = 0.0;       // (q1 - q2) / alpha
    std::optional<double> ratio;  // exp(log_ratio); empty when it would overflow a double
};

/// pi(a1)/pi(a2) = exp((q1 - q2) / alpha) for a two-action softmax policy at temperature alpha.
EtaRatio eta_ratio(double q1, double q2, double alpha);

/// Soft state value sum_a pi(a) [Q(a) - alpha log pi(a)] under the softmax policy of q at temperature alpha.
double soft_value(const std::vector<double>& q, double alpha);

struct CrossoverStep {
    std::uint64_t k = 0;
    double r_int = 0.0;
    double q_a1 = 0.0;
    double q_a2 = 0.0;
    EtaRatio eta;
};

struct CrossoverSimulation {
    std::optional<std::uint64_t> k_sim;  // smallest k with eta^k <= 1; empty when max_k is exhausted
    std::vector<CrossoverStep> trace;
};

/// Tabular replay of the soft-Q recursion for k = 1..max_k with a visit-count bonus on s1.
CrossoverSimulation simulate_crossover(const CrossoverParams& p, std::uint64_t max_k);

}  // namespace kea
