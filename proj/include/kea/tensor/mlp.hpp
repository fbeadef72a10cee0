#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "kea/core/rng.hpp"

namespace kea {

using Vector = Eigen::VectorXd;
using Matrix = Eigen::MatrixXd;

enum class Activation { relu, tanh };

Activation parse_activation(const std::string& name);
std::string to_string(Activation activation);

/**
 * Dense feed-forward network.
 *
 * weights[l] has shape (layer_sizes[l+1], layer_sizes[l]); the hidden activation is
 * applied after every layer except the last, so outputs are raw logits or values.
 * Gradients use the same type (see MlpGrads).
 */
struct MlpParams {
    std::vector<int> layer_sizes;
    std::vector<Matrix> weights;
    std::vector<Vector> biases;
    Activation activation = Activation::relu;

    int input_size() const { return layer_sizes.front(); }
    int output_size() const { return layer_sizes.back(); }
    std::size_t num_layers() const { return weights.size(); }
    std::size_t parameter_count() const;
};

using MlpGrads = MlpParams;

/// Weights and biases uniform in +-1/sqrt(fan_in).
MlpParams make_mlp(std::vector<int> layer_sizes, Activation activation, Rng& rng);

/// Same architecture, all entries zero.
MlpParams zeros_like(const MlpParams& params);

/// Throws ContractViolation unless the weight shapes chain with layer_sizes.
void validate_shapes(const MlpParams& params);
void require_same_shape(const MlpParams& a, const MlpParams& b, const char* what);

bool all_finite(const MlpParams& params);

/// FNV-1a over the raw bytes of every weight and bias; used to detect any parameter change.
std::uint64_t checksum(const MlpParams& params);

/// Post-activation values of every layer; activations[0] is the input batch.
struct MlpTape {
    std::vector<Matrix> activations;
};

Vector mlp_forward(const MlpParams& params, std::span<const double> input);

/// Batched forward pass; inputs holds one sample per column. Fills tape when given.
Matrix mlp_forward_batch(const MlpParams& params, const Matrix& inputs, MlpTape* tape = nullptr);

struct MlpBackward {
    MlpGrads param_grads;
    Vector input_grad;
};

MlpBackward mlp_backward(const MlpParams& params, std::span<const double> input,
                         std::span<const double> output_grad);

/**
 * Batched backward pass from a tape produced by mlp_forward_batch. Parameter gradients
 * are summed over the batch columns. input_grad, when given, receives dL/dinputs.
 */
MlpGrads mlp_backward_batch(const MlpParams& params, const MlpTape& tape, const Matrix& output_grad,
                            Matrix* input_grad = nullptr);

/// target <- tau * source + (1 - tau) * target, entrywise.
void polyak_update(MlpParams& target, const MlpParams& source, double tau);

double global_norm(const MlpGrads& grads);

/// Rescales grads in place so that their global L2 norm is at most max_norm. Returns the pre-clip norm.
double clip_grad_norm(MlpGrads& grads, double max_norm);

void scale_grads(MlpGrads& grads, double factor);

}  // namespace kea
