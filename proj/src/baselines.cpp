#include "uavsim/baselines.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace uavsim {

namespace {

double eval(const Snapshot& snap, const std::vector<Vec2>& placement, const AreaConfig& area,
            const ChannelParams& ch, const QoSParams& qos) {
    Snapshot s = snap;
    s.uav_xy = placement;
    return throughput(s, area.uav_altitude_m, ch, qos);
}

Vec2 clamp_box(Vec2 v, const AreaConfig& area) {
    return {std::clamp(v.x, 0.0, area.width_m), std::clamp(v.y, 0.0, area.height_m)};
}

double sigmoid(double x) {
    return x >= 0.0 ? 1.0 / (1.0 + std::exp(-x)) : std::exp(x) / (1.0 + std::exp(x));
}

}  // namespace

std::vector<Vec2> fixed_placement(const Snapshot& snap, const AreaConfig& area, FixedLayout layout,
                                  const std::vector<Vec2>& custom) {
    const std::size_t p_n = snap.num_uavs();
    switch (layout) {
        case FixedLayout::Custom:
            if (custom.size() != p_n)
                throw std::invalid_argument("fixed_placement: custom layout size != P");
            return custom;
        case FixedLayout::Corners: {
            const Vec2 corners[4] = {{area.width_m / 4, area.height_m / 4},
                                     {3 * area.width_m / 4, 3 * area.height_m / 4},
                                     {area.width_m / 4, 3 * area.height_m / 4},
                                     {3 * area.width_m / 4, area.height_m / 4}};
            std::vector<Vec2> out(p_n);
            for (std::size_t p = 0; p < p_n; ++p) out[p] = corners[p % 4];
            return out;
        }
        case FixedLayout::Center: {
            // evenly spaced on the horizontal midline
            std::vector<Vec2> out(p_n);
            for (std::size_t p = 0; p < p_n; ++p)
                out[p] = {area.width_m * double(p + 1) / double(p_n + 1), area.height_m / 2.0};
            return out;
        }
    }
    throw std::invalid_argument("fixed_placement: unknown layout");
}

SolveResult simulated_annealing(const Snapshot& snap, const AreaConfig& area,
                                const ChannelParams& ch, const QoSParams& qos,
                                const AnnealConfig& cfg) {
    cfg.validate();
    Rng rng(cfg.seed);
    std::normal_distribution<double> move(0.0, cfg.neighbor_sigma_m);
    std::uniform_real_distribution<double> unit(0.0, 1.0);

    std::vector<Vec2> current = snap.uav_xy;
    double current_tp = eval(snap, current, area, ch, qos);
    std::vector<Vec2> best = current;
    double best_tp = current_tp;

    // auto temperature on the order of one user's spectral efficiency, so
    // basin hops (dropping a covered user) stay live early on
    double temp = cfg.initial_temperature > 0.0 ? cfg.initial_temperature
                                                : std::max(0.2 * current_tp, 16.0);
    for (int it = 0; it < cfg.iterations; ++it) {
        std::vector<Vec2> cand(current.size());
        for (std::size_t p = 0; p < current.size(); ++p)
            cand[p] = clamp_box({current[p].x + move(rng), current[p].y + move(rng)}, area);
        const double cand_tp = eval(snap, cand, area, ch, qos);
        const double delta = cand_tp - current_tp;
        if (delta >= 0.0 || unit(rng) < std::exp(delta / temp)) {
            current = std::move(cand);
            current_tp = cand_tp;
            if (current_tp > best_tp) {
                best = current;
                best_tp = current_tp;
            }
        }
        temp *= cfg.cooling;
    }
    return {best, eval(snap, best, area, ch, qos)};
}

namespace {

/// Softmax-association, sigmoid-indicator relaxation of the true objective.
double relaxed_objective(const Snapshot& snap, const std::vector<Vec2>& placement,
                         const AreaConfig& area, const ChannelParams& ch, const QoSParams& qos,
                         const SmoothOptConfig& cfg) {
    Snapshot s = snap;
    s.uav_xy = placement;
    const LinkReport rep = link_report(s, area.uav_altitude_m, ch);
    double total = 0.0;
    for (std::size_t k = 0; k < rep.num_users; ++k) {
        // soft argmax of received power, in dB so the scale is geometry-free
        double max_db = -std::numeric_limits<double>::infinity();
        std::vector<double> rx_db(rep.num_uavs);
        for (std::size_t p = 0; p < rep.num_uavs; ++p) {
            rx_db[p] = 10.0 * std::log10(rep.rx(k, p));
            max_db = std::max(max_db, rx_db[p]);
        }
        double z = 0.0;
        for (std::size_t p = 0; p < rep.num_uavs; ++p) z += std::exp(rx_db[p] - max_db);
        for (std::size_t p = 0; p < rep.num_uavs; ++p) {
            const double w = std::exp(rx_db[p] - max_db) / z;
            const double r = link_distance(s.user_xy[k], s.uav_xy[p], area.uav_altitude_m);
            const double se = rep.se(k, p);
            total += w * se * sigmoid(cfg.sharpness_rate * (se - qos.rate_threshold_bpshz)) *
                     sigmoid(cfg.sharpness_dist * (qos.comm_radius_m - r));
        }
    }
    return total;
}

/// Restart seeds for the coverage geometry: user positions plus pairwise
/// intersections of the horizontal coverage circles (the optimal disk for a
/// single UAV is always anchored on one user or on two boundary users),
/// ranked by single-UAV true throughput.
std::vector<Vec2> coverage_seed_points(const Snapshot& snap, const AreaConfig& area,
                                       const ChannelParams& ch, const QoSParams& qos) {
    std::vector<Vec2> cands;
    for (const Vec2& u : snap.user_xy) cands.push_back(u);
    const double h = area.uav_altitude_m;
    if (qos.comm_radius_m > h) {
        const double radius = std::sqrt(qos.comm_radius_m * qos.comm_radius_m - h * h);
        for (std::size_t a = 0; a + 1 < snap.user_xy.size(); ++a)
            for (std::size_t b = a + 1; b < snap.user_xy.size(); ++b) {
                const Vec2 ua = snap.user_xy[a], ub = snap.user_xy[b];
                const double dx = ub.x - ua.x, dy = ub.y - ua.y;
                const double d = std::hypot(dx, dy);
                if (d < 1e-9 || d > 2.0 * radius) continue;
                const Vec2 mid{(ua.x + ub.x) / 2.0, (ua.y + ub.y) / 2.0};
                const double q = std::sqrt(radius * radius - d * d / 4.0) / d;
                for (double sgn : {1.0, -1.0}) {
                    Vec2 c{mid.x + sgn * q * -dy, mid.y + sgn * q * dx};
                    // nudge toward the pair midpoint so both users sit strictly inside
                    c.x += 1e-3 * (mid.x - c.x);
                    c.y += 1e-3 * (mid.y - c.y);
                    cands.push_back(clamp_box(c, area));
                }
            }
    }
    std::vector<std::pair<double, std::size_t>> scored(cands.size());
    for (std::size_t i = 0; i < cands.size(); ++i) {
        Snapshot one = snap;
        one.uav_xy = {cands[i]};
        scored[i] = {throughput(one, h, ch, qos), i};
    }
    std::stable_sort(scored.begin(), scored.end(),
                     [](const auto& l, const auto& r) { return l.first > r.first; });
    std::vector<Vec2> out(cands.size());
    for (std::size_t i = 0; i < cands.size(); ++i) out[i] = cands[scored[i].second];
    return out;
}

}  // namespace

SolveResult smooth_opt(const Snapshot& snap, const AreaConfig& area, const ChannelParams& ch,
                       const QoSParams& qos, const SmoothOptConfig& cfg) {
    cfg.validate();
    Rng rng(cfg.seed);
    std::uniform_real_distribution<double> ux(0.0, area.width_m);
    std::uniform_real_distribution<double> uy(0.0, area.height_m);

    const std::size_t p_n = snap.num_uavs();
    Vec2 centroid{0.0, 0.0};
    for (const Vec2& u : snap.user_xy) {
        centroid.x += u.x / double(snap.num_users());
        centroid.y += u.y / double(snap.num_users());
    }

    const std::vector<Vec2> seeds = coverage_seed_points(snap, area, ch, qos);

    SolveResult best;
    best.throughput = -1.0;
    for (int restart = 0; restart < cfg.restarts; ++restart) {
        std::vector<Vec2> pos(p_n);
        if (restart == 0) {
            pos = snap.uav_xy;
        } else if (restart == 1) {
            // centroid start with a small spread so co-located UAVs can split
            std::normal_distribution<double> jitter(0.0, 25.0);
            for (std::size_t p = 0; p < p_n; ++p)
                pos[p] = clamp_box({centroid.x + jitter(rng), centroid.y + jitter(rng)}, area);
        } else if (!seeds.empty()) {
            for (std::size_t p = 0; p < p_n; ++p) {
                const std::size_t idx = (std::size_t(restart - 2) * p_n + p) % seeds.size();
                pos[p] = seeds[idx];
            }
        } else {
            for (std::size_t p = 0; p < p_n; ++p) pos[p] = {ux(rng), uy(rng)};
        }

        double best_true = eval(snap, pos, area, ch, qos);
        std::vector<Vec2> best_pos = pos;
        const double h = 0.5;  // finite-difference step, meters
        for (int it = 0; it < cfg.max_iterations; ++it) {
            // continuation: hold the indicators soft so distant users attract,
            // then ramp geometrically up to the configured sharpness
            SmoothOptConfig stage = cfg;
            const double hold = 0.5 * double(cfg.max_iterations - 1);
            const double ramp = 0.4 * double(cfg.max_iterations - 1);
            const double frac =
                ramp > 0.0 ? std::clamp((double(it) - hold) / ramp, 0.0, 1.0) : 1.0;
            const double scale = std::pow(2e-3, 1.0 - frac);
            stage.sharpness_rate = cfg.sharpness_rate * scale;
            stage.sharpness_dist = cfg.sharpness_dist * scale;
            std::vector<double> grad(2 * p_n);
            double norm2 = 0.0;
            for (std::size_t c = 0; c < 2 * p_n; ++c) {
                auto shifted = [&](double d) {
                    std::vector<Vec2> q = pos;
                    (c % 2 == 0 ? q[c / 2].x : q[c / 2].y) += d;
                    q[c / 2] = clamp_box(q[c / 2], area);
                    return relaxed_objective(snap, q, area, ch, qos, stage);
                };
                grad[c] = (shifted(h) - shifted(-h)) / (2.0 * h);
                norm2 += grad[c] * grad[c];
            }
            const double norm = std::sqrt(norm2);
            if (norm < 1e-12) break;
            for (std::size_t p = 0; p < p_n; ++p) {
                pos[p].x += cfg.step_m * grad[2 * p] / norm;
                pos[p].y += cfg.step_m * grad[2 * p + 1] / norm;
                pos[p] = clamp_box(pos[p], area);
            }
            const double true_tp = eval(snap, pos, area, ch, qos);
            if (true_tp > best_true) {
                best_true = true_tp;
                best_pos = pos;
            }
        }
        // compass polish on the true objective: the optimum often pins a user
        // to the exact coverage boundary, a ridge the relaxed gradient slides
        // off; step-halving jumps can land on it
        for (double step = 128.0; step >= 1.0; step /= 2.0) {
            bool improved = true;
            while (improved) {
                improved = false;
                for (std::size_t p = 0; p < p_n; ++p) {
                    static constexpr double kDir[8][2] = {{1, 0},  {-1, 0}, {0, 1},  {0, -1},
                                                          {1, 1},  {1, -1}, {-1, 1}, {-1, -1}};
                    for (const auto& d : kDir) {
                        std::vector<Vec2> q = best_pos;
                        q[p] = clamp_box({q[p].x + step * d[0], q[p].y + step * d[1]}, area);
                        const double tp = eval(snap, q, area, ch, qos);
                        if (tp > best_true) {
                            best_true = tp;
                            best_pos = std::move(q);
                            improved = true;
                        }
                    }
                }
            }
        }
        if (best_true > best.throughput) {
            best.throughput = best_true;
            best.placement = best_pos;
        }
    }
    best.throughput = eval(snap, best.placement, area, ch, qos);
    return best;
}

SolveResult grid_oracle(const Snapshot& snap, const AreaConfig& area, const ChannelParams& ch,
                        const QoSParams& qos, int resolution) {
    const std::size_t p_n = snap.num_uavs();
    if (resolution < 1) throw std::invalid_argument("grid_oracle: resolution must be >= 1");
    if (p_n > 2) throw std::invalid_argument("grid_oracle: only P <= 2 is tractable");
    const double cells = std::pow(double(resolution), double(2 * p_n));
    if (cells > 1e7)
        throw std::invalid_argument("grid_oracle: resolution^(2P) exceeds the 1e7 guard");

    std::vector<double> xs(static_cast<std::size_t>(resolution));
    std::vector<double> ys(static_cast<std::size_t>(resolution));
    for (int i = 0; i < resolution; ++i) {
        if (resolution == 1) {
            xs[0] = area.width_m / 2.0;
            ys[0] = area.height_m / 2.0;
        } else {
            xs[std::size_t(i)] = area.width_m * double(i) / double(resolution - 1);
            ys[std::size_t(i)] = area.height_m * double(i) / double(resolution - 1);
        }
    }

    SolveResult best;
    best.throughput = -1.0;
    std::vector<Vec2> cand(p_n);
    if (p_n == 1) {
        for (double x : xs)
            for (double y : ys) {
                cand[0] = {x, y};
                const double tp = eval(snap, cand, area, ch, qos);
                if (tp > best.throughput) {
                    best.throughput = tp;
                    best.placement = cand;
                }
            }
    } else {
        for (double x0 : xs)
            for (double y0 : ys)
                for (double x1 : xs)
                    for (double y1 : ys) {
                        cand[0] = {x0, y0};
                        cand[1] = {x1, y1};
                        const double tp = eval(snap, cand, area, ch, qos);
                        if (tp > best.throughput) {
                            best.throughput = tp;
                            best.placement = cand;
                        }
                    }
    }
    return best;
}

}  // namespace uavsim
