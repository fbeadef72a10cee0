#include "kea/intrinsic/rnd.hpp"

#include <algorithm>

#include "kea/core/error.hpp"

namespace kea {

namespace {

std::vector<int> rnd_layers(int obs_size, const RndConfig& config) {
    require(obs_size > 0, "rnd: observation size must be positive");
    require(config.embed_dim > 0, "rnd: embedding dimension must be positive");
    require(config.clip > 0.0 && config.scale > 0.0, "rnd: clip and scale must be positive");
    std::vector<int> sizes{obs_size};
    sizes.insert(sizes.end(), config.hidden.begin(), config.hidden.end());
    sizes.push_back(config.embed_dim);
    return sizes;
}

Matrix to_matrix(const std::vector<std::vector<double>>& rows, int width) {
    Matrix m(width, static_cast<Eigen::Index>(rows.size()));
    for (std::size_t c = 0; c < rows.size(); ++c) {
        require(static_cast<int>(rows[c].size()) == width, "rnd: observation length mismatch");
        m.col(static_cast<Eigen::Index>(c)) = Eigen::Map<const Vector>(rows[c].data(), width);
    }
    return m;
}

}  // namespace

double rnd_reward_from_raw(double raw_error, const RunningStats& stats, double clip, double scale) {
    return scale * std::min(normalize(stats, raw_error), clip);
}

RndModel::RndModel(int obs_size, RndConfig config, std::uint64_t seed) : config_(std::move(config)) {
    const auto sizes = rnd_layers(obs_size, config_);
    Rng target_rng = make_rng(seed, 0x7A26E7);
    Rng predictor_rng = make_rng(seed, 0x96ED1C7);
    target_ = make_mlp(sizes, config_.activation, target_rng);
    predictor_ = make_mlp(sizes, config_.activation, predictor_rng);
    adam_ = make_adam(predictor_);
}

double RndModel::raw(std::span<const double> obs) const {
    require(static_cast<int>(obs.size()) == obs_size(), "rnd: observation length mismatch");
    const Vector diff = mlp_forward(predictor_, obs) - mlp_forward(target_, obs);
    return diff.squaredNorm();
}

Vector RndModel::raw_batch(const Matrix& obs) const {
    require(obs.rows() == obs_size(), "rnd: observation length mismatch");
    const Matrix diff = mlp_forward_batch(predictor_, obs) - mlp_forward_batch(target_, obs);
    return diff.colwise().squaredNorm().transpose();
}

double RndModel::novelty_from_raw(double raw_error) const {
    return std::min(normalize(stats_, raw_error), config_.clip);
}

double RndModel::record(std::span<const double> obs) {
    const double r = raw(obs);
    stats_.update(r);
    return r;
}

double RndModel::observe(std::span<const double> obs) { return config_.scale * novelty_from_raw(record(obs)); }

double RndModel::train(const Matrix& obs_batch) {
    require(obs_batch.cols() > 0, "rnd train: empty batch");
    require(obs_batch.rows() == obs_size(), "rnd: observation length mismatch");
    MlpTape tape;
    const Matrix prediction = mlp_forward_batch(predictor_, obs_batch, &tape);
    const Matrix diff = prediction - mlp_forward_batch(target_, obs_batch);
    const double batch = static_cast<double>(obs_batch.cols());
    const double loss = diff.colwise().squaredNorm().sum() / batch;
    MlpGrads grads = mlp_backward_batch(predictor_, tape, (2.0 / batch) * diff);
    clip_grad_norm(grads, config_.grad_clip_norm);
    adam_step(predictor_, adam_, grads, config_.lr);
    return loss;
}

double RndModel::train(const std::vector<std::vector<double>>& obs_batch) {
    require(!obs_batch.empty(), "rnd train: empty batch");
    return train(to_matrix(obs_batch, obs_size()));
}

void RndModel::set_predictor(MlpParams predictor) {
    require_same_shape(predictor, target_, "rnd set_predictor");
    predictor_ = std::move(predictor);
    adam_ = make_adam(predictor_);
}

void RndModel::set_target(MlpParams target) {
    require_same_shape(target, predictor_, "rnd set_target");
    target_ = std::move(target);
}

}  // namespace kea
