#pragma once

#include <span>

#include "kea/core/rng.hpp"
#include "kea/tensor/mlp.hpp"

namespace kea {

struct Categorical {
    Vector probs;
    Vector log_probs;
};

/// Softmax with max-subtraction; log_probs come from log-sum-exp, not log(probs).
Categorical categorical_from_logits(std::span<const double> logits);
Categorical categorical_from_logits(const Vector& logits);

/// Column-wise softmax over a (actions x batch) matrix.
void softmax_columns(const Matrix& logits, Matrix& probs, Matrix& log_probs);

double entropy(const Categorical& dist);

/// Inverse-CDF draw; the last index absorbs rounding in the cumulative sum.
int sample_index(const Vector& probs, Rng& rng);

int argmax(const Vector& values);

/// log(sum(exp(values))) computed stably.
double log_sum_exp(const Vector& values);

}  // namespace kea
