#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "uavsim/channel.hpp"

using namespace uavsim;

TEST_CASE("elevation_angle_deg: reference angles") {
    CHECK(elevation_angle_deg(100.0, 100.0) == doctest::Approx(90.0));
    CHECK(elevation_angle_deg(200.0, 100.0) == doctest::Approx(30.0));
    CHECK(elevation_angle_deg(141.4214, 100.0) == doctest::Approx(45.0).epsilon(1e-5));
    CHECK_THROWS_AS(elevation_angle_deg(99.0, 100.0), std::domain_error);
}

TEST_CASE("los_probability: Table-I constants") {
    ChannelParams p;  // B = 0.136, C = 11.95
    CHECK(los_probability(11.95, p) == doctest::Approx(1.0 / 12.95).epsilon(1e-6));
    CHECK(los_probability(90.0, p) == doctest::Approx(0.99971).epsilon(1e-4));
    // direct evaluation: 1/(1 + 11.95*exp(-0.136*33.05))
    const double expect45 = 1.0 / (1.0 + 11.95 * std::exp(-0.136 * (45.0 - 11.95)));
    CHECK(los_probability(45.0, p) == doctest::Approx(expect45).epsilon(1e-12));
    CHECK(std::abs(los_probability(45.0, p) - 0.89) < 0.01);
}

TEST_CASE("los_probability: strictly increasing, complements sum to one") {
    ChannelParams p;
    double prev = 0.0;
    for (double th = 1.0; th <= 90.0; th += 1.0) {
        const double pl = los_probability(th, p);
        CHECK(pl > prev);
        CHECK(pl > 0.0);
        CHECK(pl < 1.0);
        CHECK(pl + (1.0 - pl) == doctest::Approx(1.0));
        prev = pl;
    }
}

TEST_CASE("path_gain: free-space constant at r = 1") {
    ChannelParams p;
    p.mu_los_db = 0.0;
    p.alpha_los = 2.0;
    const double fs = std::pow(3e8 / (4.0 * std::numbers::pi * 2e9), 2.0);
    CHECK(path_gain(1.0, LinkCondition::LOS, p) == doctest::Approx(fs).epsilon(1e-12));
    CHECK(path_gain(100.0, LinkCondition::LOS, p) == doctest::Approx(fs * 1e-4).epsilon(1e-12));
}

TEST_CASE("path_gain: infinite attenuation kills the NLOS gain") {
    ChannelParams p;
    p.mu_nlos_db = 400.0;  // 1e40 attenuation
    CHECK(path_gain(100.0, LinkCondition::NLOS, p) < 1e-40);
}

TEST_CASE("path_gain: r^-alpha scaling to 1e-12 relative") {
    ChannelParams p;
    std::mt19937_64 rng(9);
    std::uniform_real_distribution<double> ur(1.0, 1000.0);
    for (int i = 0; i < 100; ++i) {
        const double r = ur(rng);
        const double ratio =
            path_gain(2.0 * r, LinkCondition::NLOS, p) / path_gain(r, LinkCondition::NLOS, p);
        CHECK(ratio == doctest::Approx(std::pow(2.0, -p.alpha_nlos)).epsilon(1e-12));
    }
}

TEST_CASE("avg_received_power: overhead link mixes the two gains by LOS probability") {
    ChannelParams p;
    const double h = 100.0;
    const double pl = los_probability(90.0, p);
    const double expect = p.tx_power_w * (pl * path_gain(h, LinkCondition::LOS, p) +
                                          (1.0 - pl) * path_gain(h, LinkCondition::NLOS, p));
    CHECK(avg_received_power(h, h, p) == doctest::Approx(expect).epsilon(1e-12));
}

TEST_CASE("avg_received_power: identical LOS/NLOS terms collapse the mixture") {
    ChannelParams p;
    p.mu_los_db = 2.0;
    p.mu_nlos_db = 2.0;
    p.alpha_los = 2.5;
    p.alpha_nlos = 2.5;
    for (double r : {120.0, 300.0, 777.0})
        CHECK(avg_received_power(r, 100.0, p) ==
              doctest::Approx(p.tx_power_w * path_gain(r, LinkCondition::LOS, p)).epsilon(1e-12));
}

TEST_CASE("avg_received_power: linear in transmit power") {
    ChannelParams p1, p2;
    p2.tx_power_w = 2.0 * p1.tx_power_w;
    for (double r : {100.0, 250.0, 600.0})
        CHECK(avg_received_power(r, 100.0, p2) ==
              doctest::Approx(2.0 * avg_received_power(r, 100.0, p1)).epsilon(1e-12));
}

TEST_CASE("avg_received_power: non-increasing in horizontal separation") {
    // needs mu_LOS <= mu_NLOS and alpha_LOS <= alpha_NLOS so both effects point one way
    ChannelParams p;
    p.mu_los_db = 0.0;
    p.mu_nlos_db = 20.0;
    const double h = 100.0;
    std::mt19937_64 rng(13);
    std::uniform_real_distribution<double> ud(0.0, 1000.0);
    for (int i = 0; i < 10000; ++i) {
        double d1 = ud(rng), d2 = ud(rng);
        if (d1 > d2) std::swap(d1, d2);
        const double r1 = std::sqrt(d1 * d1 + h * h);
        const double r2 = std::sqrt(d2 * d2 + h * h);
        CHECK(avg_received_power(r1, h, p) >= avg_received_power(r2, h, p));
    }
}

TEST_CASE("noise power: -174 dBm/Hz over 20 MHz") {
    ChannelParams p;
    CHECK(p.noise_power_w() == doctest::Approx(7.962e-14).epsilon(1e-3));
}
