#ifndef UAVSIM_NETWORK_EVAL_HPP
#define UAVSIM_NETWORK_EVAL_HPP

#include <cstddef>
#include <vector>

#include "uavsim/channel.hpp"
#include "uavsim/scenario.hpp"

namespace uavsim {

inline constexpr int kUnserved = -1;

/// Per-link quantities for every (user, uav) pair, row-major K x P.
struct LinkReport {
    std::size_t num_users{0};
    std::size_t num_uavs{0};
    std::vector<double> rx_power_w;
    std::vector<double> sinr;
    std::vector<double> spectral_eff;

    double rx(std::size_t k, std::size_t p) const { return rx_power_w[k * num_uavs + p]; }
    double sinr_at(std::size_t k, std::size_t p) const { return sinr[k * num_uavs + p]; }
    double se(std::size_t k, std::size_t p) const { return spectral_eff[k * num_uavs + p]; }
};

/// serving[k] is a UAV index or kUnserved.
struct Association {
    std::vector<int> serving;

    std::size_t served_count() const {
        std::size_t n = 0;
        for (int s : serving)
            if (s != kUnserved) ++n;
        return n;
    }
};

struct QoSParams {
    double rate_threshold_bpshz{2.5};
    double comm_radius_m{250.0};

    void validate() const {
        if (rate_threshold_bpshz < 0.0)
            throw std::invalid_argument("qos.rate_threshold_bpshz must be >= 0");
        if (comm_radius_m <= 0.0) throw std::invalid_argument("qos.comm_radius_m must be > 0");
    }
};

/// Computes received power, SINR and spectral efficiency for every link.
/// With interference=false the interference sum is dropped (SINR = rx / noise).
LinkReport link_report(const Snapshot& snap, double uav_altitude_m, const ChannelParams& ch,
                       bool interference = true);

/// Serves each user by the strongest feasible UAV (rate >= Gamma, distance <= delta,
/// both conditions closed); ties break toward the lowest UAV index.
Association associate(const LinkReport& report, const Snapshot& snap, double uav_altitude_m,
                      const QoSParams& qos);

/// Summed served spectral efficiency, bps/Hz.
double throughput(const Snapshot& snap, double uav_altitude_m, const ChannelParams& ch,
                  const QoSParams& qos);

/// Same objective with the interference term dropped from every SINR.
double throughput_no_interference(const Snapshot& snap, double uav_altitude_m,
                                  const ChannelParams& ch, const QoSParams& qos);

}  // namespace uavsim

#endif  // UAVSIM_NETWORK_EVAL_HPP
