#ifndef UAVSIM_BASELINES_HPP
#define UAVSIM_BASELINES_HPP

#include <cstdint>
#include <vector>

#include "uavsim/network_eval.hpp"
#include "uavsim/scenario.hpp"

namespace uavsim {

struct SolveResult {
    std::vector<Vec2> placement;
    double throughput{0.0};
};

enum class FixedLayout { Center, Corners, Custom };

/// Preset UAV coordinates, independent of the users. Center spreads the P UAVs
/// evenly along the horizontal midline; Corners spreads them over the box
/// corners; Custom returns the given coordinates verbatim.
std::vector<Vec2> fixed_placement(const Snapshot& snap, const AreaConfig& area, FixedLayout layout,
                                  const std::vector<Vec2>& custom = {});

struct AnnealConfig {
    double initial_temperature{-1.0};  // <= 0: auto, 20% of initial throughput (floor 16)
    double cooling{0.9995};
    int iterations{5000};
    double neighbor_sigma_m{60.0};
    std::uint64_t seed{0};

    void validate() const {
        if (cooling <= 0.0 || cooling >= 1.0)
            throw std::invalid_argument("anneal.cooling must be in (0,1)");
        if (iterations < 1) throw std::invalid_argument("anneal.iterations must be >= 1");
        if (neighbor_sigma_m <= 0.0)
            throw std::invalid_argument("anneal.neighbor_sigma_m must be > 0");
    }
};

/// Metropolis search over Gaussian neighbor moves of all UAV coordinates,
/// clamped to the box. Returns the best-ever placement; deterministic per seed.
SolveResult simulated_annealing(const Snapshot& snap, const AreaConfig& area,
                                const ChannelParams& ch, const QoSParams& qos,
                                const AnnealConfig& cfg);

struct SmoothOptConfig {
    double sharpness_rate{10.0};  // per bps/Hz, Gamma indicator relaxation
    double sharpness_dist{10.0};  // per meter, delta indicator relaxation
    double step_m{5.0};
    int max_iterations{300};
    int restarts{8};
    std::uint64_t seed{0};

    void validate() const {
        if (sharpness_rate <= 0.0 || sharpness_dist <= 0.0)
            throw std::invalid_argument("smooth.sharpness must be > 0");
        if (step_m <= 0.0) throw std::invalid_argument("smooth.step_m must be > 0");
        if (max_iterations < 1) throw std::invalid_argument("smooth.max_iterations must be >= 1");
        if (restarts < 1) throw std::invalid_argument("smooth.restarts must be >= 1");
    }
};

/// Multi-start projected gradient ascent on a smoothed objective: softmax
/// association weights and sigmoid-relaxed rate/distance indicators. Every
/// restart is scored with the true (unrelaxed) objective and the best wins.
SolveResult smooth_opt(const Snapshot& snap, const AreaConfig& area, const ChannelParams& ch,
                       const QoSParams& qos, const SmoothOptConfig& cfg);

/// Exhaustive evaluation of the true objective on a resolution x resolution
/// grid per UAV (joint grid for P=2). Ties break toward the lexicographically
/// smallest grid index. Throws when P > 2 or resolution^(2P) > 1e7.
SolveResult grid_oracle(const Snapshot& snap, const AreaConfig& area, const ChannelParams& ch,
                        const QoSParams& qos, int resolution);

}  // namespace uavsim

#endif  // UAVSIM_BASELINES_HPP
