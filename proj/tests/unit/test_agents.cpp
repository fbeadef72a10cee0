#include <gtest/gtest.h>

#include <cmath>

#include "kea/agents/q_agent.hpp"
#include "kea/agents/sac.hpp"
#include "kea/core/error.hpp"
#include "kea/tensor/categorical.hpp"
#include "oracles.hpp"

using namespace kea;

namespace {

SacConfig linear_sac(double alpha = 0.3) {
    SacConfig c;
    c.hidden = {};
    c.alpha = alpha;
    return c;
}

// Zero weights and the given biases: a network whose output ignores its input.
MlpParams constant_net(const MlpParams& like, std::vector<double> bias) {
    MlpParams p = zeros_like(like);
    p.biases.back() = Eigen::Map<const Vector>(bias.data(), static_cast<Eigen::Index>(bias.size()));
    return p;
}

TrainingBatch one_row(std::vector<double> obs, std::vector<double> next, int action, double r_ext, bool terminated) {
    TrainingBatch b;
    const auto n = static_cast<Eigen::Index>(obs.size());
    b.obs = Eigen::Map<const Vector>(obs.data(), n);
    b.next_obs = Eigen::Map<const Vector>(next.data(), n);
    b.actions = {action};
    b.reward_ext = Vector::Constant(1, r_ext);
    b.reward_int = Vector::Zero(1);
    b.not_terminated = Vector::Constant(1, terminated ? 0.0 : 1.0);
    return b;
}

TrainingBatch random_batch(int obs_size, int actions, int n, Rng& rng) {
    TrainingBatch b;
    b.obs = Matrix(obs_size, n);
    b.next_obs = Matrix(obs_size, n);
    b.reward_ext = Vector(n);
    b.reward_int = Vector(n);
    b.not_terminated = Vector(n);
    for (int i = 0; i < n; ++i) {
        for (int k = 0; k < obs_size; ++k) {
            b.obs(k, i) = uniform01(rng);
            b.next_obs(k, i) = uniform01(rng);
        }
        b.actions.push_back(static_cast<int>(uniform_index(rng, static_cast<std::size_t>(actions))));
        b.reward_ext(i) = uniform01(rng) < 0.2 ? 1.0 : 0.0;
        b.reward_int(i) = uniform01(rng);
        b.not_terminated(i) = uniform01(rng) < 0.1 ? 0.0 : 1.0;
    }
    return b;
}

void expect_bit_equal(const MlpParams& a, const MlpParams& b) {
    ASSERT_EQ(a.num_layers(), b.num_layers());
    for (std::size_t l = 0; l < a.num_layers(); ++l) {
        EXPECT_TRUE(a.weights[l] == b.weights[l]);
        EXPECT_TRUE(a.biases[l] == b.biases[l]);
    }
}

}  // namespace

TEST(SacTarget, TwoActionHandCase) {
    SacAgent agent(1, 2, linear_sac(0.3), 0);
    agent.set_policy(zeros_like(agent.policy()));
    agent.set_critics(agent.q1(), agent.q2(), constant_net(agent.q1(), {1.0, 3.0}), constant_net(agent.q2(), {2.0, 4.0}));
    const Vector y = agent.soft_target(one_row({0.0}, {0.0}, 0, 0.0, false), RewardScaling{100.0, 1.0});
    const double expected = 0.99 * (2.0 + 0.3 * std::log(2.0));
    EXPECT_NEAR(y(0), expected, 1e-14);
    EXPECT_NEAR(y(0), 2.1859, 5e-5);
}

TEST(SacTarget, TerminalTransitionHasNoBootstrap) {
    SacAgent agent(2, 4, SacConfig{}, 1);
    const Vector y = agent.soft_target(one_row({0.1, 0.2}, {0.3, 0.4}, 2, 1.0, true), RewardScaling{100.0, 1.0});
    EXPECT_EQ(y(0), 100.0);
}

TEST(SacTarget, SingleActionDropsEntropy) {
    SacAgent agent(1, 1, linear_sac(0.3), 2);
    agent.set_critics(agent.q1(), agent.q2(), constant_net(agent.q1(), {5.0}), constant_net(agent.q2(), {4.0}));
    TrainingBatch b = one_row({0.5}, {0.5}, 0, 1.0, false);
    b.reward_int(0) = 0.25;
    const Vector y = agent.soft_target(b, RewardScaling{10.0, 1.0});
    EXPECT_DOUBLE_EQ(y(0), 10.0 + 0.25 + 0.99 * 4.0);
}

TEST(SacTarget, PermutationInvariant) {
    SacAgent agent(3, 4, SacConfig{}, 3);
    Rng rng(4);
    const TrainingBatch b = random_batch(3, 4, 16, rng);
    TrainingBatch rev = b;
    for (int i = 0; i < 16; ++i) {
        const int j = 15 - i;
        rev.obs.col(i) = b.obs.col(j);
        rev.next_obs.col(i) = b.next_obs.col(j);
        rev.actions[static_cast<std::size_t>(i)] = b.actions[static_cast<std::size_t>(j)];
        rev.reward_ext(i) = b.reward_ext(j);
        rev.reward_int(i) = b.reward_int(j);
        rev.not_terminated(i) = b.not_terminated(j);
    }
    const Vector y = agent.soft_target(b, RewardScaling{});
    const Vector yr = agent.soft_target(rev, RewardScaling{});
    for (int i = 0; i < 16; ++i) EXPECT_EQ(y(i), yr(15 - i));
}

TEST(SacTarget, MissingIntrinsicRewardsRejected) {
    SacAgent agent(1, 2, linear_sac(), 5);
    TrainingBatch b = one_row({0.0}, {0.0}, 0, 0.0, false);
    b.reward_int.resize(0);
    EXPECT_THROW(agent.soft_target(b, RewardScaling{}), ContractViolation);
}

TEST(SacActor, GradientMatchesFiniteDifferences) {
    // Two one-hot states, two actions, smooth activations so no kinks interfere.
    SacConfig cfg;
    cfg.hidden = {4};
    cfg.activation = Activation::tanh;
    SacAgent agent(2, 2, cfg, 6);
    const MlpParams policy = agent.policy();
    Matrix obs(2, 2);
    obs << 1.0, 0.0, 0.0, 1.0;
    Matrix min_q(2, 2);
    min_q << 0.3, -1.2, 1.1, 0.4;
    MlpGrads grads;
    sac_actor_loss(policy, obs, min_q, 0.3, &grads);

    const double h = 1e-6;
    double worst = 0.0;
    for (std::size_t l = 0; l < policy.num_layers(); ++l) {
        for (Eigen::Index i = 0; i < policy.weights[l].size(); ++i) {
            MlpParams p = policy;
            p.weights[l].data()[i] += h;
            const double lp = sac_actor_loss(p, obs, min_q, 0.3, nullptr);
            p.weights[l].data()[i] -= 2.0 * h;
            const double lm = sac_actor_loss(p, obs, min_q, 0.3, nullptr);
            worst = std::max(worst, kea::testing::rel_error(grads.weights[l].data()[i], (lp - lm) / (2.0 * h)));
        }
        for (Eigen::Index i = 0; i < policy.biases[l].size(); ++i) {
            MlpParams p = policy;
            p.biases[l](i) += h;
            const double lp = sac_actor_loss(p, obs, min_q, 0.3, nullptr);
            p.biases[l](i) -= 2.0 * h;
            const double lm = sac_actor_loss(p, obs, min_q, 0.3, nullptr);
            worst = std::max(worst, kea::testing::rel_error(grads.biases[l](i), (lp - lm) / (2.0 * h)));
        }
    }
    EXPECT_LT(worst, 1e-4);
}

TEST(SacActor, VanishingTemperatureMatchesGreedyPolicyGradient) {
    // Linear policy: logits = W s + b. The pure policy gradient of -E_pi[Q] has
    // dL/dlogit_j = -pi_j (Q_j - E_pi[Q]) per sample.
    Rng rng(7);
    MlpParams policy = make_mlp({2, 2}, Activation::relu, rng);
    Matrix obs(2, 2);
    obs << 1.0, 0.0, 0.0, 1.0;
    Matrix q(2, 2);
    q << 1.0, -0.5, 0.2, 0.9;
    MlpGrads g;
    sac_actor_loss(policy, obs, q, 1e-8, &g);

    std::vector<double> analytic;
    std::vector<double> greedy;
    Matrix gw = Matrix::Zero(2, 2);
    Vector gb = Vector::Zero(2);
    for (int s = 0; s < 2; ++s) {
        const auto x = kea::testing::scalar_forward(policy, {obs(0, s), obs(1, s)});
        const double z = std::exp(x[0]) + std::exp(x[1]);
        const double pi[2] = {std::exp(x[0]) / z, std::exp(x[1]) / z};
        const double mean_q = pi[0] * q(0, s) + pi[1] * q(1, s);
        for (int j = 0; j < 2; ++j) {
            const double dlogit = -pi[j] * (q(j, s) - mean_q) / 2.0;
            gb(j) += dlogit;
            for (int k = 0; k < 2; ++k) gw(j, k) += dlogit * obs(k, s);
        }
    }
    for (Eigen::Index i = 0; i < 4; ++i) {
        analytic.push_back(g.weights[0].data()[i]);
        greedy.push_back(gw.data()[i]);
    }
    for (Eigen::Index i = 0; i < 2; ++i) {
        analytic.push_back(g.biases[0](i));
        greedy.push_back(gb(i));
    }
    const double cosine = kea::testing::dot(analytic, greedy) /
                          std::sqrt(kea::testing::dot(analytic, analytic) * kea::testing::dot(greedy, greedy));
    EXPECT_GT(cosine, 1.0 - 1e-3);
}

TEST(SacUpdate, PolyakTargetsExact) {
    SacConfig cfg;
    cfg.hidden = {8, 8};
    SacAgent agent(3, 4, cfg, 8);
    Rng rng(9);
    agent.update(random_batch(3, 4, 32, rng), RewardScaling{});  // move live nets away from the targets
    const MlpParams old1 = agent.q1_target();
    const MlpParams old2 = agent.q2_target();
    agent.update(random_batch(3, 4, 32, rng), RewardScaling{});
    const double tau = cfg.tau;
    for (auto [target, live, old] : {std::tuple{&agent.q1_target(), &agent.q1(), &old1},
                                     std::tuple{&agent.q2_target(), &agent.q2(), &old2}}) {
        for (std::size_t l = 0; l < old->num_layers(); ++l) {
            for (Eigen::Index i = 0; i < old->weights[l].size(); ++i) {
                const double expected = tau * live->weights[l].data()[i] + (1.0 - tau) * old->weights[l].data()[i];
                ASSERT_EQ(target->weights[l].data()[i], expected);
            }
            for (Eigen::Index i = 0; i < old->biases[l].size(); ++i) {
                const double expected = tau * live->biases[l](i) + (1.0 - tau) * old->biases[l](i);
                ASSERT_EQ(target->biases[l](i), expected);
            }
        }
    }
}

TEST(SacUpdate, ZeroLossWeightFreezesEverything) {
    SacConfig cfg;
    cfg.hidden = {16, 16};
    SacAgent agent(2, 4, cfg, 10);
    agent.set_loss_weight(0.0);
    const auto sum = agent.parameter_checksum();
    const MlpParams policy = agent.policy();
    Rng rng(11);
    for (int i = 0; i < 50; ++i) {
        const UpdateLosses l = agent.update(random_batch(2, 4, 32, rng), RewardScaling{100.0, 1.0});
        EXPECT_EQ(l.critic1, 0.0);
        EXPECT_EQ(l.actor, 0.0);
    }
    EXPECT_EQ(agent.parameter_checksum(), sum);
    expect_bit_equal(agent.policy(), policy);
    EXPECT_EQ(agent.update_count(), 0u);
    EXPECT_THROW(agent.set_loss_weight(0.5), ContractViolation);
}

TEST(SacUpdate, CriticStepReducesBatchLoss) {
    SacConfig cfg;
    cfg.hidden = {32, 32};
    SacAgent agent(3, 4, cfg, 12);
    Rng rng(13);
    const TrainingBatch b = random_batch(3, 4, 64, rng);
    const Vector y = agent.soft_target(b, RewardScaling{});
    const double before1 = sac_critic_loss(agent.q1(), b.obs, b.actions, y, nullptr);
    const double before2 = sac_critic_loss(agent.q2(), b.obs, b.actions, y, nullptr);
    agent.update(b, RewardScaling{});
    EXPECT_LT(sac_critic_loss(agent.q1(), b.obs, b.actions, y, nullptr), before1);
    EXPECT_LT(sac_critic_loss(agent.q2(), b.obs, b.actions, y, nullptr), before2);
}

TEST(SacUpdate, NonFiniteLossRaises) {
    SacAgent agent(1, 2, linear_sac(), 14);
    TrainingBatch b = one_row({0.0}, {0.0}, 0, std::numeric_limits<double>::infinity(), false);
    EXPECT_THROW(agent.update(b, RewardScaling{}), NumericError);
}

TEST(SacAct, UniformPolicySamplesEvenly) {
    SacAgent agent(2, 4, linear_sac(), 15);
    agent.set_policy(zeros_like(agent.policy()));
    Rng rng(16);
    std::vector<int> counts(4, 0);
    const std::vector<double> obs{0.3, 0.6};
    for (int i = 0; i < 10000; ++i) counts[static_cast<std::size_t>(agent.act(obs, ActMode::sample, rng))]++;
    for (int c : counts) EXPECT_NEAR(c / 10000.0, 0.25, 0.02);
}

TEST(SacAct, GreedyTakesArgmaxAndSamplingIsSeeded) {
    SacAgent agent(2, 4, linear_sac(), 17);
    agent.set_policy(constant_net(agent.policy(), {10.0, 0.0, 0.0, 0.0}));
    Rng rng(0);
    EXPECT_EQ(agent.act(std::vector<double>{0.1, 0.9}, ActMode::greedy, rng), 0);
    SacAgent other(2, 4, SacConfig{}, 18);
    Rng a(5);
    Rng b(5);
    for (int i = 0; i < 50; ++i) {
        const std::vector<double> obs{0.01 * i, 0.5};
        EXPECT_EQ(other.act(obs, ActMode::sample, a), other.act(obs, ActMode::sample, b));
    }
    EXPECT_THROW(agent.act(std::vector<double>{0.1}, ActMode::greedy, rng), ContractViolation);
}

TEST(QAct, GreedyWithoutExploration) {
    QConfig c;
    c.epsilon = 0.0;
    const Vector p = q_action_probs((Vector(2) << 1.0, 5.0).finished(), c);
    EXPECT_EQ(p(1), 1.0);
    QAgent agent(1, 2, q_config_for_variant("dqn", [] {
                     QConfig q;
                     q.hidden = {};
                     q.epsilon = 0.0;
                     return q;
                 }()),
                 0);
    agent.set_q(constant_net(agent.q(), {1.0, 5.0}), constant_net(agent.q(), {1.0, 5.0}));
    Rng rng(1);
    for (int i = 0; i < 100; ++i) EXPECT_EQ(agent.act(std::vector<double>{0.2}, ActMode::sample, rng), 1);
}

TEST(QAct, FullEpsilonGreedyIsUniform) {
    QConfig c;
    c.hidden = {};
    c.epsilon = 1.0;
    QAgent agent(1, 4, c, 2);
    agent.set_q(constant_net(agent.q(), {3.0, 0.0, 1.0, 2.0}), agent.q());
    Rng rng(3);
    std::vector<int> counts(4, 0);
    for (int i = 0; i < 10000; ++i) counts[static_cast<std::size_t>(agent.act(std::vector<double>{0.0}, ActMode::sample, rng))]++;
    for (int n : counts) EXPECT_NEAR(n / 10000.0, 0.25, 0.02);
}

TEST(QAct, ProportionalStepFollowsSoftmax) {
    QConfig c = q_config_for_variant("dqn_p");
    c.hidden = {};
    c.epsilon = 1.0;
    c.temperature = 1.0;
    const Vector q = (Vector(2) << std::log(1.0), std::log(3.0)).finished();
    EXPECT_NEAR(q_action_probs(q, c)(1), 0.75, 1e-15);
    QAgent agent(1, 2, c, 4);
    agent.set_q(constant_net(agent.q(), {q(0), q(1)}), agent.q());
    Rng rng(5);
    int ones = 0;
    for (int i = 0; i < 20000; ++i) ones += agent.act(std::vector<double>{0.0}, ActMode::sample, rng);
    EXPECT_NEAR(ones / 20000.0, 0.75, 0.015);
}

TEST(QTarget, TerminalTargetIsRewardForBothVariants) {
    for (const char* v : {"dqn", "sql"}) {
        QConfig c = q_config_for_variant(v);
        c.hidden = {8};
        QAgent agent(2, 3, c, 6);
        const Vector y = agent.td_target(one_row({0.1, 0.1}, {0.2, 0.2}, 1, 1.0, true), RewardScaling{1.0, 1.0});
        EXPECT_EQ(y(0), 1.0) << v;
    }
}

TEST(QTarget, SoftTargetOfEqualValuesAddsLogTwo) {
    QConfig c = q_config_for_variant("sql");
    c.hidden = {};
    QAgent agent(1, 2, c, 7);
    agent.set_q(agent.q(), zeros_like(agent.q()));
    const Vector y = agent.td_target(one_row({0.0}, {0.0}, 0, 0.5, false), RewardScaling{1.0, 1.0});
    EXPECT_NEAR(y(0), 0.5 + 0.99 * std::log(2.0), 1e-15);
}

TEST(QTarget, SingleActionSoftEqualsHard) {
    QConfig sql = q_config_for_variant("sql");
    QConfig dqn = q_config_for_variant("dqn");
    sql.hidden = dqn.hidden = {8};
    QAgent a(2, 1, sql, 8);
    QAgent b(2, 1, dqn, 8);
    Rng rng(9);
    const TrainingBatch batch = random_batch(2, 1, 32, rng);
    const Vector ya = a.td_target(batch, RewardScaling{});
    const Vector yb = b.td_target(batch, RewardScaling{});
    for (int i = 0; i < 32; ++i) EXPECT_EQ(ya(i), yb(i));
}

TEST(QUpdate, FreezeAndPolyak) {
    QConfig c;
    c.hidden = {8};
    QAgent agent(2, 3, c, 10);
    Rng rng(11);
    agent.set_loss_weight(0.0);
    const auto sum = agent.parameter_checksum();
    agent.update(random_batch(2, 3, 16, rng), RewardScaling{});
    EXPECT_EQ(agent.parameter_checksum(), sum);
    agent.set_loss_weight(1.0);
    const MlpParams old = agent.q_target();
    agent.update(random_batch(2, 3, 16, rng), RewardScaling{});
    EXPECT_NE(agent.parameter_checksum(), sum);
    for (std::size_t l = 0; l < old.num_layers(); ++l) {
        for (Eigen::Index i = 0; i < old.weights[l].size(); ++i) {
            EXPECT_EQ(agent.q_target().weights[l].data()[i],
                      c.tau * agent.q().weights[l].data()[i] + (1.0 - c.tau) * old.weights[l].data()[i]);
        }
    }
}

TEST(QConfigs, VariantPresets) {
    EXPECT_EQ(QAgent(1, 2, q_config_for_variant("dqn"), 0).variant(), "dqn");
    EXPECT_EQ(QAgent(1, 2, q_config_for_variant("dqn_p"), 0).variant(), "dqn_p");
    EXPECT_EQ(QAgent(1, 2, q_config_for_variant("sql"), 0).variant(), "sql");
    EXPECT_THROW(q_config_for_variant("ppo"), ConfigError);
}
