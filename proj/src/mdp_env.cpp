#include "uavsim/mdp_env.hpp"

#include <algorithm>
#include <stdexcept>

namespace uavsim {

std::pair<EnvState, double> best_state(const EpisodeTrace& trace) {
    if (trace.entries.empty()) throw std::invalid_argument("best_state: empty trace");
    std::size_t best = 0;
    for (std::size_t i = 1; i < trace.entries.size(); ++i)
        if (trace.entries[i].throughput > trace.entries[best].throughput) best = i;
    return {trace.entries[best].state, trace.entries[best].throughput};
}

PlacementEnv::PlacementEnv(AreaConfig area, ChannelParams ch, QoSParams qos, EnvConfig cfg)
    : area_(area), ch_(ch), qos_(qos), cfg_(cfg) {
    area_.validate();
    ch_.validate();
    qos_.validate();
    cfg_.validate();
}

EnvState PlacementEnv::encode(const Snapshot& snap) const {
    const std::size_t k_n = snap.num_users();
    const std::size_t p_n = snap.num_uavs();
    EnvState s;
    s.reserve(k_n * 3 + p_n * 2);
    for (const Vec2& u : snap.user_xy) {
        s.push_back(u.x / area_.width_m);
        s.push_back(u.y / area_.height_m);
    }
    for (const Vec2& q : snap.uav_xy) {
        s.push_back(q.x / area_.width_m);
        s.push_back(q.y / area_.height_m);
    }
    const LinkReport rep = link_report(snap, area_.uav_altitude_m, ch_);
    const Association assoc = associate(rep, snap, area_.uav_altitude_m, qos_);
    for (int serving : assoc.serving) {
        // (index + 1)/P, 0 for unserved
        s.push_back(serving == kUnserved ? 0.0 : double(serving + 1) / double(p_n));
    }
    return s;
}

std::vector<Vec2> PlacementEnv::decode_uav_positions(const EnvState& state) const {
    const std::size_t k_n = current_.num_users();
    const std::size_t p_n = current_.num_uavs();
    if (state.size() != k_n * 3 + p_n * 2)
        throw std::invalid_argument("decode_uav_positions: state length mismatch");
    std::vector<Vec2> out(p_n);
    for (std::size_t p = 0; p < p_n; ++p) {
        out[p].x = state[2 * k_n + 2 * p] * area_.width_m;
        out[p].y = state[2 * k_n + 2 * p + 1] * area_.height_m;
    }
    return out;
}

double PlacementEnv::current_throughput() const {
    return throughput(current_, area_.uav_altitude_m, ch_, qos_);
}

double PlacementEnv::current_throughput_no_interference() const {
    return throughput_no_interference(current_, area_.uav_altitude_m, ch_, qos_);
}

EnvState PlacementEnv::reset(const Snapshot& snap) {
    if (snap.num_users() < 1 || snap.num_uavs() < 1)
        throw std::invalid_argument("reset: snapshot needs K >= 1 and P >= 1");
    current_ = snap;
    epoch_ = 0;
    has_reset_ = true;
    if (cfg_.baseline == RewardBaseline::Zero) {
        prev_throughput_ = 0.0;
        prev_throughput_free_ = 0.0;
    } else {
        prev_throughput_ = current_throughput();
        prev_throughput_free_ = current_throughput_no_interference();
    }
    return encode(current_);
}

StepResult PlacementEnv::step_impl(const EnvAction& action, bool pretrain) {
    if (!has_reset_) throw std::logic_error("step: environment has not been reset");
    if (action.size() != current_.num_uavs() * 2)
        throw std::invalid_argument("step: action length must be 2P");

    for (std::size_t p = 0; p < current_.num_uavs(); ++p) {
        Vec2& q = current_.uav_xy[p];
        q.x = std::clamp(q.x + action[2 * p], 0.0, area_.width_m);
        q.y = std::clamp(q.y + action[2 * p + 1], 0.0, area_.height_m);
    }
    ++epoch_;

    StepResult res;
    res.epoch = epoch_;
    if (pretrain) {
        res.throughput_now = current_throughput_no_interference();
        res.reward = res.throughput_now - prev_throughput_free_;
        prev_throughput_free_ = res.throughput_now;
    } else {
        res.throughput_now = current_throughput();
        res.reward = res.throughput_now - prev_throughput_;
        prev_throughput_ = res.throughput_now;
    }
    res.next_state = encode(current_);
    return res;
}

StepResult PlacementEnv::step(const EnvAction& action) { return step_impl(action, false); }

StepResult PlacementEnv::step_pretrain(const EnvAction& action) { return step_impl(action, true); }

}  // namespace uavsim
