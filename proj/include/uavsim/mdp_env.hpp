#ifndef UAVSIM_MDP_ENV_HPP
#define UAVSIM_MDP_ENV_HPP

#include <cstddef>
#include <utility>
#include <vector>

#include "uavsim/network_eval.hpp"
#include "uavsim/scenario.hpp"

namespace uavsim {

using EnvState = std::vector<double>;
using EnvAction = std::vector<double>;

enum class RewardBaseline { Zero, Natural };

struct EnvConfig {
    double a_max{5.0};
    int epochs_per_episode{800};
    RewardBaseline baseline{RewardBaseline::Zero};

    void validate() const {
        if (a_max <= 0.0) throw std::invalid_argument("env.a_max must be > 0");
        if (epochs_per_episode < 1)
            throw std::invalid_argument("env.epochs_per_episode must be >= 1");
    }
};

struct StepResult {
    EnvState next_state;
    double reward{0.0};
    double throughput_now{0.0};
    int epoch{0};
};

struct TraceEntry {
    EnvState state;
    EnvAction action;
    double reward{0.0};
    double throughput{0.0};
};

struct EpisodeTrace {
    std::vector<TraceEntry> entries;
};

/// Returns the trace entry with the highest recorded throughput (ties -> earliest).
std::pair<EnvState, double> best_state(const EpisodeTrace& trace);

/// Per-time-slot placement MDP. State = normalized user/UAV positions plus
/// per-user association codes; action = per-UAV position deltas, componentwise
/// clamped to the area box after application. Reward is the throughput change
/// between consecutive epochs; step_pretrain uses the interference-free
/// throughput instead. Single-owner mutable state.
class PlacementEnv {
public:
    PlacementEnv(AreaConfig area, ChannelParams ch, QoSParams qos, EnvConfig cfg);

    EnvState reset(const Snapshot& snap);
    StepResult step(const EnvAction& action);
    StepResult step_pretrain(const EnvAction& action);

    EnvState encode(const Snapshot& snap) const;
    std::vector<Vec2> decode_uav_positions(const EnvState& state) const;

    const Snapshot& snapshot() const { return current_; }
    std::size_t state_dim() const { return current_.num_users() * 3 + current_.num_uavs() * 2; }
    std::size_t action_dim() const { return current_.num_uavs() * 2; }
    const AreaConfig& area() const { return area_; }
    const EnvConfig& config() const { return cfg_; }

    double current_throughput() const;
    double current_throughput_no_interference() const;

private:
    StepResult step_impl(const EnvAction& action, bool pretrain);

    AreaConfig area_;
    ChannelParams ch_;
    QoSParams qos_;
    EnvConfig cfg_;
    Snapshot current_;
    double prev_throughput_{0.0};       // accumulator for the true-reward mode
    double prev_throughput_free_{0.0};  // accumulator for the pretrain mode
    int epoch_{0};
    bool has_reset_{false};
};

}  // namespace uavsim

#endif  // UAVSIM_MDP_ENV_HPP
