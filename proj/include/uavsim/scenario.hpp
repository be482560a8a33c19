#ifndef UAVSIM_SCENARIO_HPP
#define UAVSIM_SCENARIO_HPP

#include <cstddef>
#include <cstdint>
#include <random>
#include <stdexcept>
#include <vector>

namespace uavsim {

struct Vec2 {
    double x{0.0};
    double y{0.0};
};

/// Rectangular service area with a fixed UAV flight altitude.
struct AreaConfig {
    double width_m{800.0};
    double height_m{800.0};
    double uav_altitude_m{100.0};

    void validate() const {
        if (width_m <= 0.0) throw std::invalid_argument("area.width_m must be > 0");
        if (height_m <= 0.0) throw std::invalid_argument("area.height_m must be > 0");
        if (uav_altitude_m <= 0.0) throw std::invalid_argument("area.uav_altitude_m must be > 0");
    }
};

/// Positions of all users and UAVs at one time slot.
struct Snapshot {
    std::int64_t time_slot{0};
    std::vector<Vec2> user_xy;
    std::vector<Vec2> uav_xy;

    std::size_t num_users() const { return user_xy.size(); }
    std::size_t num_uavs() const { return uav_xy.size(); }
};

enum class DistKind { Uniform, Gaussian };

struct UserDistribution {
    DistKind kind{DistKind::Uniform};
    std::vector<Vec2> gaussian_centers;
    double gaussian_sigma_m{0.0};

    static UserDistribution uniform() { return UserDistribution{}; }

    static UserDistribution gaussian(std::vector<Vec2> centers, double sigma_m) {
        UserDistribution d;
        d.kind = DistKind::Gaussian;
        d.gaussian_centers = std::move(centers);
        d.gaussian_sigma_m = sigma_m;
        return d;
    }

    /// Single center at the area midpoint, sigma = width/8.
    static UserDistribution gaussian_default(const AreaConfig& area) {
        return gaussian({Vec2{area.width_m / 2.0, area.height_m / 2.0}}, area.width_m / 8.0);
    }

    void validate() const {
        if (kind == DistKind::Gaussian) {
            if (gaussian_centers.empty())
                throw std::invalid_argument("gaussian distribution requires at least one center");
            if (gaussian_sigma_m <= 0.0)
                throw std::invalid_argument("gaussian_sigma_m must be > 0");
        }
    }
};

using Rng = std::mt19937_64;

/// Draws k user positions inside the area. Gaussian samples are clamped to the box.
std::vector<Vec2> sample_users(const UserDistribution& dist, std::size_t k,
                               const AreaConfig& area, Rng& rng);

/// Advances the snapshot one time slot: users are re-sampled, UAVs stay put.
Snapshot advance_slot(const Snapshot& prev, const UserDistribution& dist,
                      const AreaConfig& area, Rng& rng);

/// 3-D link distance between a ground user and a UAV flying at altitude h.
double link_distance(const Vec2& user, const Vec2& uav, double h);

}  // namespace uavsim

#endif  // UAVSIM_SCENARIO_HPP
