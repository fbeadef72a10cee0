#include "kea/tensor/mlp.hpp"

#include <cmath>
#include <cstring>

#include "kea/core/error.hpp"

namespace kea {

Activation parse_activation(const std::string& name) {
    if (name == "relu") return Activation::relu;
    if (name == "tanh") return Activation::tanh;
    throw ContractViolation("unknown activation '" + name + "'");
}

std::string to_string(Activation activation) {
    return activation == Activation::relu ? "relu" : "tanh";
}

std::size_t MlpParams::parameter_count() const {
    std::size_t n = 0;
    for (std::size_t l = 0; l < weights.size(); ++l) {
        n += static_cast<std::size_t>(weights[l].size() + biases[l].size());
    }
    return n;
}

MlpParams make_mlp(std::vector<int> layer_sizes, Activation activation, Rng& rng) {
    require(layer_sizes.size() >= 2, "an MLP needs at least input and output sizes");
    for (int n : layer_sizes) {
        require(n > 0, "layer sizes must be positive");
    }
    MlpParams params;
    params.activation = activation;
    params.layer_sizes = std::move(layer_sizes);
    for (std::size_t l = 0; l + 1 < params.layer_sizes.size(); ++l) {
        const int fan_in = params.layer_sizes[l];
        const int fan_out = params.layer_sizes[l + 1];
        const double bound = 1.0 / std::sqrt(static_cast<double>(fan_in));
        Matrix w(fan_out, fan_in);
        Vector b(fan_out);
        // Column-major fill keeps the draw order stable across Eigen versions.
        for (int c = 0; c < fan_in; ++c) {
            for (int r = 0; r < fan_out; ++r) {
                w(r, c) = (2.0 * uniform01(rng) - 1.0) * bound;
            }
        }
        for (int r = 0; r < fan_out; ++r) {
            b(r) = (2.0 * uniform01(rng) - 1.0) * bound;
        }
        params.weights.push_back(std::move(w));
        params.biases.push_back(std::move(b));
    }
    return params;
}

MlpParams zeros_like(const MlpParams& params) {
    MlpParams out;
    out.layer_sizes = params.layer_sizes;
    out.activation = params.activation;
    for (std::size_t l = 0; l < params.num_layers(); ++l) {
        out.weights.push_back(Matrix::Zero(params.weights[l].rows(), params.weights[l].cols()));
        out.biases.push_back(Vector::Zero(params.biases[l].size()));
    }
    return out;
}

void validate_shapes(const MlpParams& params) {
    require(params.layer_sizes.size() >= 2, "MLP must have at least one layer");
    require(params.weights.size() + 1 == params.layer_sizes.size() &&
                params.biases.size() == params.weights.size(),
            "MLP layer count does not match layer_sizes");
    for (std::size_t l = 0; l < params.weights.size(); ++l) {
        require(params.weights[l].rows() == params.layer_sizes[l + 1] &&
                    params.weights[l].cols() == params.layer_sizes[l] &&
                    params.biases[l].size() == params.layer_sizes[l + 1],
                "MLP layer " + std::to_string(l) + " shape does not chain with layer_sizes");
    }
}

void require_same_shape(const MlpParams& a, const MlpParams& b, const char* what) {
    bool same = a.layer_sizes == b.layer_sizes && a.weights.size() == b.weights.size() &&
                a.biases.size() == b.biases.size();
    for (std::size_t l = 0; same && l < a.weights.size(); ++l) {
        same = a.weights[l].rows() == b.weights[l].rows() && a.weights[l].cols() == b.weights[l].cols() &&
               a.biases[l].size() == b.biases[l].size();
    }
    require(same, std::string(what) + ": parameter shapes differ");
}

bool all_finite(const MlpParams& params) {
    for (std::size_t l = 0; l < params.num_layers(); ++l) {
        if (!params.weights[l].allFinite() || !params.biases[l].allFinite()) return false;
    }
    return true;
}

namespace {

void fnv1a(std::uint64_t& h, const double* data, std::size_t n) {
    const auto* bytes = reinterpret_cast<const unsigned char*>(data);
    for (std::size_t i = 0; i < n * sizeof(double); ++i) {
        h ^= bytes[i];
        h *= 0x100000001b3ULL;
    }
}

void apply_activation(Activation activation, Matrix& z) {
    if (activation == Activation::relu) {
        z = z.cwiseMax(0.0);
    } else {
        z = z.array().tanh().matrix();
    }
}

// Multiplies grad in place by the activation derivative, expressed through the post-activation value.
void apply_activation_grad(Activation activation, const Matrix& post, Matrix& grad) {
    if (activation == Activation::relu) {
        grad = (post.array() > 0.0).select(grad, 0.0);
    } else {
        grad.array() *= (1.0 - post.array().square());
    }
}

}  // namespace

std::uint64_t checksum(const MlpParams& params) {
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (std::size_t l = 0; l < params.num_layers(); ++l) {
        fnv1a(h, params.weights[l].data(), static_cast<std::size_t>(params.weights[l].size()));
        fnv1a(h, params.biases[l].data(), static_cast<std::size_t>(params.biases[l].size()));
    }
    return h;
}

Vector mlp_forward(const MlpParams& params, std::span<const double> input) {
    require(static_cast<int>(input.size()) == params.input_size(),
            "mlp_forward: input length " + std::to_string(input.size()) + " != " +
                std::to_string(params.input_size()));
    Matrix x = Eigen::Map<const Vector>(input.data(), static_cast<Eigen::Index>(input.size()));
    return mlp_forward_batch(params, x);
}

Matrix mlp_forward_batch(const MlpParams& params, const Matrix& inputs, MlpTape* tape) {
    require(inputs.rows() == params.input_size(),
            "mlp_forward: input rows " + std::to_string(inputs.rows()) + " != " +
                std::to_string(params.input_size()));
    const std::size_t layers = params.num_layers();
    if (tape != nullptr) {
        tape->activations.resize(layers + 1);
        tape->activations[0] = inputs;
    }
    Matrix x = inputs;
    for (std::size_t l = 0; l < layers; ++l) {
        Matrix z = params.weights[l] * x;
        z.colwise() += params.biases[l];
        if (l + 1 < layers) {
            apply_activation(params.activation, z);
        }
        if (tape != nullptr) {
            tape->activations[l + 1] = z;
        }
        x = std::move(z);
    }
    return x;
}

MlpGrads mlp_backward_batch(const MlpParams& params, const MlpTape& tape, const Matrix& output_grad,
                            Matrix* input_grad) {
    const std::size_t layers = params.num_layers();
    require(tape.activations.size() == layers + 1, "mlp_backward: tape does not match network depth");
    require(output_grad.rows() == params.output_size() && output_grad.cols() == tape.activations[0].cols(),
            "mlp_backward: output_grad shape mismatch");
    MlpGrads grads = zeros_like(params);
    Matrix delta = output_grad;
    for (std::size_t l = layers; l-- > 0;) {
        if (l + 1 < layers) {
            apply_activation_grad(params.activation, tape.activations[l + 1], delta);
        }
        grads.weights[l].noalias() = delta * tape.activations[l].transpose();
        grads.biases[l] = delta.rowwise().sum();
        if (l > 0 || input_grad != nullptr) {
            Matrix upstream = params.weights[l].transpose() * delta;
            delta = std::move(upstream);
        }
    }
    if (input_grad != nullptr) {
        *input_grad = std::move(delta);
    }
    return grads;
}

MlpBackward mlp_backward(const MlpParams& params, std::span<const double> input,
                         std::span<const double> output_grad) {
    require(static_cast<int>(input.size()) == params.input_size(), "mlp_backward: input length mismatch");
    require(static_cast<int>(output_grad.size()) == params.output_size(),
            "mlp_backward: output_grad length mismatch");
    MlpTape tape;
    Matrix x = Eigen::Map<const Vector>(input.data(), static_cast<Eigen::Index>(input.size()));
    mlp_forward_batch(params, x, &tape);
    Matrix g = Eigen::Map<const Vector>(output_grad.data(), static_cast<Eigen::Index>(output_grad.size()));
    Matrix input_grad;
    MlpBackward out{mlp_backward_batch(params, tape, g, &input_grad), Vector()};
    out.input_grad = input_grad.col(0);
    return out;
}

void polyak_update(MlpParams& target, const MlpParams& source, double tau) {
    require_same_shape(target, source, "polyak_update");
    for (std::size_t l = 0; l < target.num_layers(); ++l) {
        target.weights[l] = tau * source.weights[l] + (1.0 - tau) * target.weights[l];
        target.biases[l] = tau * source.biases[l] + (1.0 - tau) * target.biases[l];
    }
}

double global_norm(const MlpGrads& grads) {
    double sq = 0.0;
    for (std::size_t l = 0; l < grads.num_layers(); ++l) {
        sq += grads.weights[l].squaredNorm() + grads.biases[l].squaredNorm();
    }
    return std::sqrt(sq);
}

double clip_grad_norm(MlpGrads& grads, double max_norm) {
    const double norm = global_norm(grads);
    if (norm > max_norm && norm > 0.0) {
        scale_grads(grads, max_norm / norm);
    }
    return norm;
}

void scale_grads(MlpGrads& grads, double factor) {
    for (std::size_t l = 0; l < grads.num_layers(); ++l) {
        grads.weights[l] *= factor;
        grads.biases[l] *= factor;
    }
}

}  // namespace kea
