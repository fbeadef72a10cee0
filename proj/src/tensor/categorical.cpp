#include "kea/tensor/categorical.hpp"

#include <cmath>

#include "kea/core/error.hpp"

namespace kea {

Categorical categorical_from_logits(std::span<const double> logits) {
    require(!logits.empty(), "categorical_from_logits: empty logits");
    return categorical_from_logits(Vector(Eigen::Map<const Vector>(logits.data(), static_cast<Eigen::Index>(logits.size()))));
}

Categorical categorical_from_logits(const Vector& logits) {
    require(logits.size() > 0, "categorical_from_logits: empty logits");
    require(logits.allFinite(), "categorical_from_logits: logits must be finite");
    const double lse = log_sum_exp(logits);
    Categorical out;
    out.log_probs = logits.array() - lse;
    out.probs = out.log_probs.array().exp();
    return out;
}

void softmax_columns(const Matrix& logits, Matrix& probs, Matrix& log_probs) {
    require(logits.rows() > 0, "softmax_columns: empty logits");
    log_probs.resize(logits.rows(), logits.cols());
    for (Eigen::Index c = 0; c < logits.cols(); ++c) {
        const double m = logits.col(c).maxCoeff();
        const double lse = m + std::log((logits.col(c).array() - m).exp().sum());
        log_probs.col(c) = logits.col(c).array() - lse;
    }
    probs = log_probs.array().exp();
}

double entropy(const Categorical& dist) {
    double h = 0.0;
    for (Eigen::Index i = 0; i < dist.probs.size(); ++i) {
        if (dist.probs(i) > 0.0) h -= dist.probs(i) * dist.log_probs(i);
    }
    return h;
}

int sample_index(const Vector& probs, Rng& rng) {
    require(probs.size() > 0, "sample_index: empty distribution");
    const double u = uniform01(rng);
    double cumulative = 0.0;
    for (Eigen::Index i = 0; i + 1 < probs.size(); ++i) {
        cumulative += probs(i);
        if (u < cumulative) return static_cast<int>(i);
    }
    return static_cast<int>(probs.size() - 1);
}

int argmax(const Vector& values) {
    require(values.size() > 0, "argmax: empty vector");
    Eigen::Index best = 0;
    values.maxCoeff(&best);
    return static_cast<int>(best);
}

double log_sum_exp(const Vector& values) {
    require(values.size() > 0, "log_sum_exp: empty vector");
    const double m = values.maxCoeff();
    return m + std::log((values.array() - m).exp().sum());
}

}  // namespace kea
