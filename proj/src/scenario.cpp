#include "uavsim/scenario.hpp"

#include <algorithm>
#include <cmath>

namespace uavsim {

namespace {

double clamp_to(double v, double lo, double hi) { return std::min(std::max(v, lo), hi); }

}  // namespace

std::vector<Vec2> sample_users(const UserDistribution& dist, std::size_t k,
                               const AreaConfig& area, Rng& rng) {
    area.validate();
    dist.validate();
    std::vector<Vec2> out;
    out.reserve(k);
    if (dist.kind == DistKind::Uniform) {
        std::uniform_real_distribution<double> ux(0.0, area.width_m);
        std::uniform_real_distribution<double> uy(0.0, area.height_m);
        for (std::size_t i = 0; i < k; ++i) out.push_back({ux(rng), uy(rng)});
    } else {
        std::uniform_int_distribution<std::size_t> pick(0, dist.gaussian_centers.size() - 1);
        std::normal_distribution<double> n(0.0, dist.gaussian_sigma_m);
        for (std::size_t i = 0; i < k; ++i) {
            const Vec2& c = dist.gaussian_centers[pick(rng)];
            // clamp out-of-area draws so K is always exact
            out.push_back({clamp_to(c.x + n(rng), 0.0, area.width_m),
                           clamp_to(c.y + n(rng), 0.0, area.height_m)});
        }
    }
    return out;
}

Snapshot advance_slot(const Snapshot& prev, const UserDistribution& dist,
                      const AreaConfig& area, Rng& rng) {
    Snapshot next;
    next.time_slot = prev.time_slot + 1;
    next.user_xy = sample_users(dist, prev.num_users(), area, rng);
    next.uav_xy = prev.uav_xy;  // the solver moves the UAVs, not the clock
    return next;
}

double link_distance(const Vec2& user, const Vec2& uav, double h) {
    if (h <= 0.0) throw std::invalid_argument("link_distance: h must be > 0");
    const double dx = user.x - uav.x;
    const double dy = user.y - uav.y;
    return std::sqrt(dx * dx + dy * dy + h * h);
}

}  // namespace uavsim
