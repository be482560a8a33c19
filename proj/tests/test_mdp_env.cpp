#include <doctest.h>

#include <cmath>
#include <random>

#include "uavsim/mdp_env.hpp"

using namespace uavsim;

namespace {

const AreaConfig kArea{800.0, 800.0, 100.0};

Snapshot make_snap(std::vector<Vec2> users, std::vector<Vec2> uavs) {
    Snapshot s;
    s.user_xy = std::move(users);
    s.uav_xy = std::move(uavs);
    return s;
}

PlacementEnv make_env(RewardBaseline baseline = RewardBaseline::Zero) {
    EnvConfig cfg;
    cfg.baseline = baseline;
    return PlacementEnv(kArea, ChannelParams{}, QoSParams{}, cfg);
}

Snapshot random_snap(int k, int p, Rng& rng) {
    std::uniform_real_distribution<double> u(0.0, 800.0);
    Snapshot s;
    for (int i = 0; i < k; ++i) s.user_xy.push_back({u(rng), u(rng)});
    for (int i = 0; i < p; ++i) s.uav_xy.push_back({u(rng), u(rng)});
    return s;
}

}  // namespace

TEST_CASE("reset: state length is K*3 + P*2") {
    auto env = make_env();
    CHECK(env.reset(make_snap({{1, 2}, {3, 4}}, {{5, 6}})).size() == 8);

    Rng rng(1);
    const Snapshot paper_scale = random_snap(24, 2, rng);
    CHECK(env.reset(paper_scale).size() == 76);
}

TEST_CASE("reset: deterministic encoding") {
    auto env = make_env();
    const Snapshot snap = make_snap({{100, 200}}, {{300, 400}});
    const EnvState a = env.reset(snap);
    const EnvState b = env.reset(snap);
    CHECK(a == b);
}

TEST_CASE("state round-trip: decode(encode) reproduces UAV positions to 1e-9 m") {
    auto env = make_env();
    Rng rng(17);
    for (int i = 0; i < 50; ++i) {
        const Snapshot snap = random_snap(4, 3, rng);
        const EnvState s = env.reset(snap);
        const auto uavs = env.decode_uav_positions(s);
        for (std::size_t p = 0; p < 3; ++p) {
            CHECK(std::abs(uavs[p].x - snap.uav_xy[p].x) < 1e-9);
            CHECK(std::abs(uavs[p].y - snap.uav_xy[p].y) < 1e-9);
        }
    }
}

TEST_CASE("step: zero action gives zero reward under the natural baseline") {
    auto env = make_env(RewardBaseline::Natural);
    env.reset(make_snap({{100, 100}, {200, 150}}, {{150, 120}}));
    const StepResult res = env.step({0.0, 0.0});
    CHECK(res.reward == doctest::Approx(0.0).epsilon(1e-12));
    CHECK(res.epoch == 1);
}

TEST_CASE("step: first reward equals the full throughput under the zero baseline") {
    auto env = make_env(RewardBaseline::Zero);
    env.reset(make_snap({{100, 100}, {200, 150}}, {{150, 120}}));
    const StepResult res = env.step({0.0, 0.0});
    CHECK(res.reward == doctest::Approx(res.throughput_now).epsilon(1e-12));
    CHECK(res.throughput_now > 0.0);
}

TEST_CASE("step: boundary pushes clamp to the box edge exactly") {
    auto env = make_env();
    env.reset(make_snap({{400, 400}}, {{795, 3}}));
    const StepResult res = env.step({50.0, -50.0});
    const auto uavs = env.decode_uav_positions(res.next_state);
    CHECK(uavs[0].x == doctest::Approx(800.0));
    CHECK(uavs[0].y == doctest::Approx(0.0));
}

TEST_CASE("step: action then its negation telescopes to zero") {
    auto env = make_env();
    env.reset(make_snap({{300, 300}, {500, 500}}, {{400, 400}}));
    const StepResult r1 = env.step({4.0, -3.0});
    const StepResult r2 = env.step({-4.0, 3.0});
    // first reward carries the zero-baseline offset; the pair nets to the initial throughput
    CHECK(r1.reward + r2.reward == doctest::Approx(r2.throughput_now).epsilon(1e-9));
    const auto uavs = env.decode_uav_positions(r2.next_state);
    CHECK(uavs[0].x == doctest::Approx(400.0).epsilon(1e-9));
    CHECK(uavs[0].y == doctest::Approx(400.0).epsilon(1e-9));
}

TEST_CASE("step: wrong action length is a contract violation") {
    auto env = make_env();
    env.reset(make_snap({{1, 1}}, {{2, 2}}));
    CHECK_THROWS_AS(env.step({1.0, 2.0, 3.0}), std::invalid_argument);
}

TEST_CASE("step_pretrain: identical to step when P = 1") {
    auto env_a = make_env();
    auto env_b = make_env();
    const Snapshot snap = make_snap({{100, 100}, {300, 200}}, {{200, 200}});
    env_a.reset(snap);
    env_b.reset(snap);
    const StepResult ra = env_a.step({2.0, 2.0});
    const StepResult rb = env_b.step_pretrain({2.0, 2.0});
    CHECK(ra.reward == doctest::Approx(rb.reward).epsilon(1e-12));
}

TEST_CASE("telescoping identity holds for both modes and both baselines") {
    Rng rng(99);
    std::uniform_real_distribution<double> act(-5.0, 5.0);
    for (RewardBaseline baseline : {RewardBaseline::Zero, RewardBaseline::Natural}) {
        for (bool pretrain : {false, true}) {
            auto env = make_env(baseline);
            const Snapshot snap = random_snap(5, 2, rng);
            env.reset(snap);
            const double initial = pretrain ? env.current_throughput_no_interference()
                                            : env.current_throughput();
            const double base = baseline == RewardBaseline::Zero ? 0.0 : initial;
            double total = 0.0;
            double final_tp = initial;
            for (int i = 0; i < 30; ++i) {
                EnvAction a{act(rng), act(rng), act(rng), act(rng)};
                const StepResult res = pretrain ? env.step_pretrain(a) : env.step(a);
                total += res.reward;
                final_tp = res.throughput_now;
            }
            CHECK(total == doctest::Approx(final_tp - base).epsilon(1e-9));
        }
    }
}

TEST_CASE("box invariance: UAVs never leave the area") {
    auto env = make_env();
    Rng rng(123);
    std::uniform_real_distribution<double> act(-5.0, 5.0);
    env.reset(random_snap(3, 2, rng));
    for (int i = 0; i < 500; ++i) {
        const StepResult res = env.step({act(rng), act(rng), act(rng), act(rng)});
        for (const Vec2& q : env.snapshot().uav_xy) {
            CHECK(q.x >= 0.0);
            CHECK(q.x <= 800.0);
            CHECK(q.y >= 0.0);
            CHECK(q.y <= 800.0);
        }
        (void)res;
    }
}

TEST_CASE("step is a pure function of (snapshot, action)") {
    const Snapshot snap = make_snap({{250, 250}, {600, 100}}, {{400, 400}});
    auto env_a = make_env();
    auto env_b = make_env();
    env_a.reset(snap);
    env_b.reset(snap);
    const StepResult ra = env_a.step({3.0, -2.0});
    const StepResult rb = env_b.step({3.0, -2.0});
    CHECK(ra.reward == rb.reward);
    CHECK(ra.throughput_now == rb.throughput_now);
    CHECK(ra.next_state == rb.next_state);
}

TEST_CASE("best_state: peak, monotone and singleton traces") {
    EpisodeTrace trace;
    CHECK_THROWS_AS(best_state(trace), std::invalid_argument);

    trace.entries.push_back({{1.0}, {}, 0.0, 1.0});
    CHECK(best_state(trace).second == 1.0);

    trace.entries.push_back({{2.0}, {}, 0.0, 5.0});
    trace.entries.push_back({{3.0}, {}, 0.0, 3.0});
    const auto [state, tp] = best_state(trace);
    CHECK(tp == 5.0);
    CHECK(state == EnvState{2.0});

    // linear-scan oracle over a longer trace
    EpisodeTrace longer;
    Rng rng(5);
    std::uniform_real_distribution<double> u(0.0, 10.0);
    double max_tp = -1.0;
    for (int i = 0; i < 100; ++i) {
        const double tp_i = u(rng);
        longer.entries.push_back({{double(i)}, {}, 0.0, tp_i});
        max_tp = std::max(max_tp, tp_i);
    }
    CHECK(best_state(longer).second == max_tp);

    // ties resolve to the earliest epoch
    EpisodeTrace tie;
    tie.entries.push_back({{1.0}, {}, 0.0, 7.0});
    tie.entries.push_back({{2.0}, {}, 0.0, 7.0});
    CHECK(best_state(tie).first == EnvState{1.0});
}
