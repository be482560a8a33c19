#include <doctest.h>

#include <cmath>
#include <cstdio>
#include <random>

#include "uavsim/ddpg.hpp"

using namespace uavsim;

namespace {

AgentConfig small_config() {
    AgentConfig cfg;
    cfg.hidden_sizes = {8, 8};
    cfg.batch_size = 4;
    cfg.episodes = 1;
    cfg.epochs = 3;
    cfg.buffer_capacity = 1000;
    cfg.normalize_states = false;
    cfg.learning_rate = 1e-3;
    return cfg;
}

Transition make_transition(std::size_t sdim, std::size_t adim, std::mt19937_64& rng) {
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    Transition t;
    t.state.resize(sdim);
    t.next_state.resize(sdim);
    t.action.resize(adim);
    for (double& v : t.state) v = u(rng);
    for (double& v : t.next_state) v = u(rng);
    for (double& v : t.action) v = u(rng);
    t.reward = u(rng);
    return t;
}

}  // namespace

TEST_CASE("replay buffer: bounded FIFO with oldest-first eviction") {
    ReplayBuffer buf(3);
    for (int i = 0; i < 4; ++i) {
        Transition t;
        t.reward = double(i);
        buf.push(t);
    }
    CHECK(buf.size() == 3);
    CHECK(buf.at(0).reward == 1.0);  // entry 0 evicted
    CHECK(buf.at(2).reward == 3.0);
    CHECK_THROWS_AS(buf.at(3), std::out_of_range);
}

TEST_CASE("replay buffer: sampling only returns stored transitions") {
    ReplayBuffer buf(10);
    Rng rng(1);
    for (int i = 0; i < 5; ++i) {
        Transition t;
        t.reward = double(i);
        buf.push(t);
    }
    for (const Transition* t : buf.sample(64, rng)) {
        CHECK(t->reward >= 0.0);
        CHECK(t->reward <= 4.0);
    }
}

TEST_CASE("act: deterministic without exploration, noise vanishes with sigma") {
    DdpgAgent agent(6, 2, 5.0, small_config(), 42);
    const EnvState s{0.1, 0.2, 0.3, 0.4, 0.5, 0.6};
    const EnvAction a1 = agent.act(s, false);
    const EnvAction a2 = agent.act(s, false);
    CHECK(a1 == a2);
    for (double v : a1) {
        CHECK(v >= -5.0);
        CHECK(v <= 5.0);
    }
    agent.set_noise_sigma(0.0);
    CHECK(agent.act(s, true) == a1);
}

TEST_CASE("act: near-zero-initialized actor emits small actions") {
    DdpgAgent agent(10, 4, 5.0, small_config(), 7);
    Rng rng(3);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    for (int i = 0; i < 50; ++i) {
        EnvState s(10);
        for (double& v : s) v = u(rng);
        for (double v : agent.act(s, false)) CHECK(std::abs(v) <= 0.05 * 5.0);
    }
}

TEST_CASE("td_target: gamma = 0 reduces to the rewards") {
    AgentConfig cfg = small_config();
    cfg.gamma = 0.0;
    DdpgAgent agent(4, 2, 5.0, cfg, 11);
    Rng rng(5);
    std::vector<Transition> storage;
    for (int i = 0; i < 6; ++i) storage.push_back(make_transition(4, 2, rng));
    std::vector<const Transition*> batch;
    for (const auto& t : storage) batch.push_back(&t);
    const auto y = agent.td_target(batch);
    for (std::size_t i = 0; i < batch.size(); ++i)
        CHECK(y[i] == doctest::Approx(batch[i]->reward).epsilon(1e-12));
}

TEST_CASE("td_target: zero target critic reduces to the rewards") {
    DdpgAgent agent(4, 2, 5.0, small_config(), 13);
    for (auto& layer : agent.critic_weights().w) layer.assign(layer.size(), 0.0);
    for (auto& layer : agent.critic_weights().b) layer.assign(layer.size(), 0.0);
    agent.sync_targets();
    Rng rng(6);
    std::vector<Transition> storage;
    for (int i = 0; i < 4; ++i) storage.push_back(make_transition(4, 2, rng));
    std::vector<const Transition*> batch;
    for (const auto& t : storage) batch.push_back(&t);
    const auto y = agent.td_target(batch);
    for (std::size_t i = 0; i < batch.size(); ++i)
        CHECK(y[i] == doctest::Approx(batch[i]->reward).epsilon(1e-12));
}

TEST_CASE("td_target: frozen targets are bit-stable between syncs") {
    DdpgAgent agent(4, 2, 5.0, small_config(), 17);
    Rng rng(7);
    std::vector<Transition> storage;
    for (int i = 0; i < 4; ++i) storage.push_back(make_transition(4, 2, rng));
    std::vector<const Transition*> batch;
    for (const auto& t : storage) batch.push_back(&t);
    const auto y1 = agent.td_target(batch);
    agent.train_critic(batch, y1);  // moves the online critic only
    const auto y2 = agent.td_target(batch);
    CHECK(y1 == y2);
}

TEST_CASE("train_critic: targets equal to outputs give near-zero loss") {
    DdpgAgent agent(4, 2, 5.0, small_config(), 19);
    Rng rng(8);
    std::vector<Transition> storage;
    for (int i = 0; i < 4; ++i) storage.push_back(make_transition(4, 2, rng));
    std::vector<const Transition*> batch;
    for (const auto& t : storage) batch.push_back(&t);
    // zero critic: outputs are exactly 0, so zero targets give exactly zero loss
    for (auto& layer : agent.critic_weights().w) layer.assign(layer.size(), 0.0);
    for (auto& layer : agent.critic_weights().b) layer.assign(layer.size(), 0.0);
    const std::vector<double> targets(batch.size(), 0.0);
    CHECK(agent.train_critic(batch, targets) == doctest::Approx(0.0));
}

TEST_CASE("train_critic: duplicated sample points the same way as the single sample") {
    DdpgAgent a1(4, 2, 5.0, small_config(), 23);
    DdpgAgent a2(4, 2, 5.0, small_config(), 23);
    Rng rng(9);
    const Transition t = make_transition(4, 2, rng);
    const std::vector<const Transition*> single{&t};
    const std::vector<const Transition*> repeated{&t, &t, &t, &t};
    const std::vector<double> y1{1.5};
    const std::vector<double> y4(4, 1.5);
    a1.train_critic(single, y1);
    a2.train_critic(repeated, y4);
    // mean over identical terms: identical update
    CHECK(a1.critic_weights().w == a2.critic_weights().w);
}

TEST_CASE("train_actor: constant critic leaves the actor unchanged") {
    DdpgAgent agent(4, 2, 5.0, small_config(), 29);
    for (auto& layer : agent.critic_weights().w) layer.assign(layer.size(), 0.0);
    for (auto& layer : agent.critic_weights().b) layer.assign(layer.size(), 7.0);
    const MlpWeights before = agent.actor_weights();
    Rng rng(10);
    std::vector<Transition> storage;
    for (int i = 0; i < 4; ++i) storage.push_back(make_transition(4, 2, rng));
    std::vector<const Transition*> batch;
    for (const auto& t : storage) batch.push_back(&t);
    const double q = agent.train_actor(batch);
    CHECK(q == doctest::Approx(7.0));
    CHECK(agent.actor_weights().w == before.w);
}

TEST_CASE("train_actor: ascent pushes toward higher Q, critic untouched") {
    AgentConfig cfg = small_config();
    cfg.learning_rate = 1e-2;
    DdpgAgent agent(2, 1, 5.0, cfg, 31);
    // critic = +w . inputs with positive weight on the action input
    auto& cw = agent.critic_weights();
    for (auto& layer : cw.w) layer.assign(layer.size(), 0.0);
    for (auto& layer : cw.b) layer.assign(layer.size(), 0.0);
    // single path: make it effectively linear in the action through relu kept active
    // simpler check: mean action moves up over repeated updates on a fixed batch
    Rng rng(11);
    std::vector<Transition> storage;
    for (int i = 0; i < 4; ++i) storage.push_back(make_transition(2, 1, rng));
    std::vector<const Transition*> batch;
    for (const auto& t : storage) batch.push_back(&t);

    DdpgAgent fresh(2, 1, 5.0, cfg, 31);
    const MlpWeights critic_before = fresh.critic_weights();
    // train the critic so Q increases with the action: targets = +10 * action
    for (int it = 0; it < 400; ++it) {
        std::vector<double> targets;
        for (const Transition* t : batch) targets.push_back(10.0 * t->action[0]);
        fresh.train_critic(batch, targets);
    }
    double before_mean = 0.0, after_mean = 0.0;
    for (const Transition* t : batch) before_mean += fresh.act(t->state, false)[0] / 4.0;
    const MlpWeights critic_trained = fresh.critic_weights();
    for (int it = 0; it < 200; ++it) fresh.train_actor(batch);
    for (const Transition* t : batch) after_mean += fresh.act(t->state, false)[0] / 4.0;
    CHECK(after_mean > before_mean);
    CHECK(fresh.critic_weights().w == critic_trained.w);  // actor update left it alone
    (void)critic_before;
}

TEST_CASE("policy gradient matches finite differences through both networks") {
    AgentConfig cfg = small_config();
    cfg.hidden_sizes = {6};
    DdpgAgent agent(3, 2, 5.0, cfg, 37);
    Rng rng(12);
    std::vector<Transition> storage;
    for (int i = 0; i < 3; ++i) storage.push_back(make_transition(3, 2, rng));
    std::vector<const Transition*> batch;
    for (const auto& t : storage) batch.push_back(&t);

    // objective: mean_j Q(s_j, pi(s_j)), differentiated by hand via FD over actor params
    auto objective = [&](DdpgAgent& ag) {
        double sum = 0.0;
        for (const Transition* t : batch) {
            const EnvAction a = ag.act(t->state, false);
            // critic input uses action / a_max = tanh output
            std::vector<double> in(t->state.begin(), t->state.end());
            for (double v : a) in.push_back(v / 5.0);
            sum += forward(ag.critic_weights(), ag.critic_spec(), in)[0] / double(batch.size());
        }
        return sum;
    };

    // analytic gradient recovered from one tiny adam-free probe is hard to expose;
    // instead verify the update direction correlates with the FD gradient
    const double base = objective(agent);
    std::vector<double> fd;
    auto& aw = agent.actor_weights();
    const double h = 1e-6;
    for (auto& layer : aw.w)
        for (double& v : layer) {
            const double orig = v;
            v = orig + h;
            const double up = objective(agent);
            v = orig - h;
            const double down = objective(agent);
            v = orig;
            fd.push_back((up - down) / (2.0 * h));
        }
    const MlpWeights before = agent.actor_weights();
    agent.train_actor(batch);
    // first adam step moves each weight by ~lr*sign(gradient of ascent objective)
    std::size_t idx = 0;
    int agree = 0, total = 0;
    for (std::size_t l = 0; l < before.w.size(); ++l)
        for (std::size_t i = 0; i < before.w[l].size(); ++i, ++idx) {
            const double delta = agent.actor_weights().w[l][i] - before.w[l][i];
            if (std::abs(fd[idx]) < 1e-10) continue;
            ++total;
            if (delta * fd[idx] > 0.0) ++agree;
        }
    CHECK(total > 0);
    CHECK(double(agree) >= 0.99 * double(total));
    (void)base;
}

TEST_CASE("train_agent: smoke run completes and is seed-deterministic") {
    TrainSetup setup;
    setup.area = {400.0, 400.0, 100.0};
    setup.num_users = 3;
    setup.num_uavs = 1;
    setup.dist = UserDistribution::uniform();
    setup.env.a_max = 5.0;
    setup.agent = small_config();
    setup.agent.episodes = 2;
    setup.agent.epochs = 5;
    setup.seed = 77;
    setup.record_wall_clock = false;

    DdpgAgent a1(3 * 3 + 1 * 2, 2, 5.0, setup.agent, setup.seed);
    DdpgAgent a2(3 * 3 + 1 * 2, 2, 5.0, setup.agent, setup.seed);
    const auto logs1 = train_agent(setup, a1);
    const auto logs2 = train_agent(setup, a2);
    REQUIRE(logs1.size() == 2);
    for (std::size_t i = 0; i < logs1.size(); ++i) {
        CHECK(logs1[i].cumulative_reward == logs2[i].cumulative_reward);
        CHECK(logs1[i].final_throughput == logs2[i].final_throughput);
        CHECK(logs1[i].best_throughput == logs2[i].best_throughput);
    }
    CHECK(a1.actor_weights().w == a2.actor_weights().w);
}

TEST_CASE("checkpoint: save/load round-trips the agent bit for bit") {
    AgentConfig cfg = small_config();
    DdpgAgent agent(6, 2, 5.0, cfg, 41);
    const std::string path = "test_checkpoint.bin";
    agent.save(path);
    DdpgAgent loaded(1, 1, 1.0, cfg, 0);
    loaded.load(path);
    CHECK(loaded.state_dim() == 6);
    CHECK(loaded.action_dim() == 2);
    CHECK(loaded.a_max() == 5.0);
    CHECK(loaded.actor_weights().w == agent.actor_weights().w);
    const EnvState s{0.1, 0.9, 0.3, 0.2, 0.6, 0.5};
    CHECK(loaded.act(s, false) == agent.act(s, false));
    std::remove(path.c_str());
}

TEST_CASE("decide: deterministic and never below the initial throughput") {
    AgentConfig cfg = small_config();
    DdpgAgent agent(3 * 3 + 2, 2, 5.0, cfg, 43);
    PlacementEnv env({400.0, 400.0, 100.0}, ChannelParams{}, QoSParams{}, EnvConfig{});
    Snapshot snap;
    snap.user_xy = {{100, 100}, {120, 140}, {300, 300}};
    snap.uav_xy = {{110, 120}};
    const auto [p1, t1] = decide(snap, agent, env, 20);
    const auto [p2, t2] = decide(snap, agent, env, 20);
    CHECK(t1 == t2);
    REQUIRE(p1.size() == 1);
    CHECK(p1[0].x == p2[0].x);

    PlacementEnv env2({400.0, 400.0, 100.0}, ChannelParams{}, QoSParams{}, EnvConfig{});
    env2.reset(snap);
    CHECK(t1 >= env2.current_throughput() - 1e-12);
}
