#include <gtest/gtest.h>

#include <cmath>

#include "kea/core/error.hpp"
#include "kea/intrinsic/counters.hpp"
#include "kea/intrinsic/intrinsic_model.hpp"
#include "kea/intrinsic/rnd.hpp"
#include "oracles.hpp"

using namespace kea;

namespace {

MlpParams constant_output(int in, int out, double value) {
    Rng rng(0);
    MlpParams p = make_mlp({in, out}, Activation::relu, rng);
    p.weights[0].setZero();
    p.biases[0].setConstant(value);
    return p;
}

RndConfig scalar_embedding() {
    RndConfig c;
    c.hidden = {};
    c.embed_dim = 1;
    return c;
}

}  // namespace

TEST(Rnd, IdenticalNetworksGiveZero) {
    RndModel m(2, RndConfig{}, 1);
    m.set_predictor(m.target());
    EXPECT_EQ(m.raw(std::vector<double>{0.3, 0.9}), 0.0);
    EXPECT_EQ(m.reward(std::vector<double>{0.3, 0.9}), 0.0);
}

TEST(Rnd, ScalarSquaredError) {
    RndModel m(3, scalar_embedding(), 2);
    m.set_target(constant_output(3, 1, 0.0));
    m.set_predictor(constant_output(3, 1, 0.5));
    EXPECT_DOUBLE_EQ(m.raw(std::vector<double>{1, 2, 3}), 0.25);
}

TEST(Rnd, RawMatchesElementwiseOracle) {
    RndModel m(2, RndConfig{}, 3);
    Rng rng(4);
    for (int i = 0; i < 20; ++i) {
        const auto x = kea::testing::random_vector(2, rng, 0.0, 1.0);
        const auto f = kea::testing::scalar_forward(m.target(), x);
        const auto g = kea::testing::scalar_forward(m.predictor(), x);
        double ref = 0.0;
        for (std::size_t k = 0; k < f.size(); ++k) ref += (g[k] - f[k]) * (g[k] - f[k]);
        EXPECT_NEAR(m.raw(x), ref, 1e-13 * std::max(1.0, ref));
    }
}

TEST(Rnd, TargetAndPredictorDifferAtInit) {
    const RndModel m(2, RndConfig{}, 5);
    EXPECT_NE(checksum(m.target()), checksum(m.predictor()));
    EXPECT_GT(m.raw(std::vector<double>{0.5, 0.5}), 0.0);
}

TEST(Rnd, RewardClipArithmetic) {
    RunningStats unit;
    unit.update(-1.0);
    unit.update(1.0);  // std 1
    EXPECT_DOUBLE_EQ(rnd_reward_from_raw(10.0, unit, 2.0, 0.5), 1.0);
    EXPECT_EQ(rnd_reward_from_raw(0.0, unit, 2.0, 0.5), 0.0);
    EXPECT_EQ(rnd_reward_from_raw(0.0, RunningStats{}, 2.0, 0.5), 0.0);
}

TEST(Rnd, WelfordTraceOfRaws) {
    // raws 1, 4, 9 observed in order; normalization after each update, scale 1, clip 10.
    RunningStats s;
    const double raws[] = {1.0, 4.0, 9.0};
    const double means[] = {1.0, 2.5, 14.0 / 3.0};
    const double m2s[] = {0.0, 4.5, 4.5 + (9.0 - 2.5) * (9.0 - 14.0 / 3.0)};
    for (int i = 0; i < 3; ++i) {
        s.update(raws[i]);
        EXPECT_NEAR(s.mean, means[i], 1e-15);
        EXPECT_NEAR(s.m2, m2s[i], 1e-12);
        const double std = std::sqrt(m2s[i] / (i + 1));
        const double expected = std::min(raws[i] / std::max(std, 1e-8), 10.0);
        EXPECT_NEAR(rnd_reward_from_raw(raws[i], s, 10.0, 1.0), expected, 1e-12);
    }
}

TEST(Rnd, RewardWithinBounds) {
    RndModel m(2, RndConfig{}, 6);
    Rng rng(7);
    for (int i = 0; i < 500; ++i) {
        const auto x = kea::testing::random_vector(2, rng, 0.0, 1.0);
        const double r = m.observe(x);
        EXPECT_GE(r, 0.0);
        EXPECT_LE(r, m.config().scale * m.config().clip);
        if (i % 5 == 0) m.train({x});
    }
}

TEST(Rnd, StatsOnlyMoveOnCollection) {
    RndModel m(2, RndConfig{}, 8);
    m.observe(std::vector<double>{0.1, 0.2});
    const auto before = m.stats().count;
    m.reward(std::vector<double>{0.3, 0.3});
    m.novelty(std::vector<double>{0.3, 0.3});
    m.train(std::vector<std::vector<double>>{{0.3, 0.3}});
    EXPECT_EQ(m.stats().count, before);
    m.record(std::vector<double>{0.3, 0.3});
    EXPECT_EQ(m.stats().count, before + 1);
}

TEST(Rnd, TrainingReducesErrorOnFixedObservation) {
    RndModel m(2, RndConfig{}, 9);
    const std::vector<double> x{0.35, 0.8};
    const double initial = m.raw(x);
    for (int i = 0; i < 500; ++i) m.train({x});
    EXPECT_LE(m.raw(x), 0.1 * initial);
}

TEST(Rnd, TrainingLeavesTargetUntouched) {
    RndModel m(2, RndConfig{}, 10);
    const auto target_sum = checksum(m.target());
    const Vector probe = mlp_forward(m.target(), std::vector<double>{0.7, 0.1});
    for (int i = 0; i < 100; ++i) m.train(std::vector<std::vector<double>>{{0.2, 0.4}});
    EXPECT_EQ(checksum(m.target()), target_sum);
    const Vector after = mlp_forward(m.target(), std::vector<double>{0.7, 0.1});
    EXPECT_EQ(probe, after);
}

TEST(Rnd, TrainReturnsPreStepMeanRaw) {
    RndModel m(2, RndConfig{}, 11);
    const std::vector<std::vector<double>> batch{{0.1, 0.2}, {0.9, 0.4}, {0.5, 0.5}};
    double mean = 0.0;
    for (const auto& x : batch) mean += m.raw(x);
    mean /= 3.0;
    EXPECT_NEAR(m.train(batch), mean, 1e-13);
}

TEST(Rnd, EmptyBatchAndShapeErrors) {
    RndModel m(2, RndConfig{}, 12);
    EXPECT_THROW(m.train(std::vector<std::vector<double>>{}), ContractViolation);
    EXPECT_THROW(m.raw(std::vector<double>{1.0}), ContractViolation);
}

TEST(NovelD, CombineCases) {
    EXPECT_DOUBLE_EQ(noveld_combine(1.0, 0.4, 0.5, true), 0.8);
    EXPECT_EQ(noveld_combine(1.0, 4.0, 0.5, true), 0.0);
    EXPECT_EQ(noveld_combine(3.0, 0.0, 0.5, false), 0.0);
}

TEST(NovelD, SecondEpisodicVisitGivesZero) {
    RndModel m(2, RndConfig{}, 13);
    EpisodicCounter counter;
    const std::vector<double> a{0.1, 0.1};
    const std::vector<double> b{0.9, 0.9};
    noveld_reward(m, a, b, counter);
    EXPECT_EQ(noveld_reward(m, a, b, counter), 0.0);
    Rng rng(14);
    for (int i = 0; i < 50; ++i) {
        const auto s = kea::testing::random_vector(2, rng, 0.0, 1.0);
        EXPECT_EQ(noveld_reward(m, s, b, counter), 0.0);
    }
}

TEST(NovelD, ReplayScoreMatchesCollectionGate) {
    NovelDIntrinsic model(2, RndConfig{}, 15);
    model.begin_episode(std::vector<double>{0.0, 0.0});
    Transition t1;
    t1.obs = {0.0, 0.0};
    t1.next_obs = {0.5, 0.5};
    Transition t2 = t1;
    t2.obs = {0.25, 0.25};
    const IntrinsicSignal first = model.collect(t1);
    EXPECT_DOUBLE_EQ(first.reward, model.score(t1));
    EXPECT_DOUBLE_EQ(first.reward, 0.5 * first.switch_score);
    model.collect(t2);
    EXPECT_TRUE(t1.first_visit);
    EXPECT_FALSE(t2.first_visit);
    EXPECT_EQ(model.score(t2), 0.0);
}

TEST(Counters, CountRewardIsOneOverK) {
    VisitCounter c;
    const std::vector<double> s{1.0, 0.0, 0.0};
    for (int k = 1; k <= 10; ++k) EXPECT_DOUBLE_EQ(count_reward(c, s), 1.0 / k);
}

TEST(Counters, DistinctStatesIndependent) {
    VisitCounter c;
    const std::vector<double> a{1.0, 0.0};
    const std::vector<double> b{0.0, 1.0};
    count_reward(c, a);
    count_reward(c, a);
    EXPECT_EQ(count_reward(c, b), 1.0);
    EXPECT_EQ(c.count(a), 2u);
}

TEST(Counters, EpisodicResetEmpties) {
    EpisodicCounter c;
    c.visit(std::vector<double>{0.5});
    c.visit(std::vector<double>{0.5});
    EXPECT_EQ(c.count(std::vector<double>{0.5}), 2u);
    c.reset();
    EXPECT_TRUE(c.empty());
    EXPECT_EQ(c.count(std::vector<double>{0.5}), 0u);
}

TEST(IntrinsicModel, RndSwitchScoreIsUnscaledNovelty) {
    RndConfig cfg;
    cfg.scale = 0.5;
    RndIntrinsic model(2, cfg, 16);
    Transition t;
    t.obs = {0.1, 0.1};
    t.next_obs = {0.6, 0.2};
    const IntrinsicSignal s = model.collect(t);
    EXPECT_DOUBLE_EQ(s.reward, 0.5 * s.switch_score);
    EXPECT_LE(s.switch_score, cfg.clip);
    EXPECT_DOUBLE_EQ(model.score(t), s.reward);
}

TEST(IntrinsicModel, FactoryKinds) {
    IntrinsicConfig c;
    for (auto kind : {IntrinsicKind::none, IntrinsicKind::rnd, IntrinsicKind::noveld, IntrinsicKind::count}) {
        c.kind = kind;
        EXPECT_EQ(make_intrinsic(c, 2, 0)->kind(), kind);
        EXPECT_EQ(parse_intrinsic_kind(to_string(kind)), kind);
    }
    EXPECT_THROW(parse_intrinsic_kind("icm"), ConfigError);
}
