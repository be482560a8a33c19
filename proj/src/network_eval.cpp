#include "uavsim/network_eval.hpp"

#include <cmath>

namespace uavsim {

LinkReport link_report(const Snapshot& snap, double uav_altitude_m, const ChannelParams& ch,
                       bool interference) {
    const std::size_t k_n = snap.num_users();
    const std::size_t p_n = snap.num_uavs();
    LinkReport rep;
    rep.num_users = k_n;
    rep.num_uavs = p_n;
    rep.rx_power_w.resize(k_n * p_n);
    rep.sinr.resize(k_n * p_n);
    rep.spectral_eff.resize(k_n * p_n);

    const double noise = ch.noise_power_w();
    for (std::size_t k = 0; k < k_n; ++k) {
        double total = 0.0;
        for (std::size_t p = 0; p < p_n; ++p) {
            const double r = link_distance(snap.user_xy[k], snap.uav_xy[p], uav_altitude_m);
            const double rx = avg_received_power(r, uav_altitude_m, ch);
            rep.rx_power_w[k * p_n + p] = rx;
            total += rx;
        }
        for (std::size_t p = 0; p < p_n; ++p) {
            const double rx = rep.rx_power_w[k * p_n + p];
            const double interf = interference ? total - rx : 0.0;
            const double s = rx / (interf + noise);
            rep.sinr[k * p_n + p] = s;
            rep.spectral_eff[k * p_n + p] = std::log2(1.0 + s);
        }
    }
    return rep;
}

Association associate(const LinkReport& report, const Snapshot& snap, double uav_altitude_m,
                      const QoSParams& qos) {
    Association assoc;
    assoc.serving.assign(report.num_users, kUnserved);
    for (std::size_t k = 0; k < report.num_users; ++k) {
        double best_rx = -1.0;
        for (std::size_t p = 0; p < report.num_uavs; ++p) {
            const double r = link_distance(snap.user_xy[k], snap.uav_xy[p], uav_altitude_m);
            // closed conditions: rate == Gamma and distance == delta are feasible
            if (r > qos.comm_radius_m) continue;
            if (report.se(k, p) < qos.rate_threshold_bpshz) continue;
            if (report.rx(k, p) > best_rx) {  // strict: ties keep the lowest index
                best_rx = report.rx(k, p);
                assoc.serving[k] = static_cast<int>(p);
            }
        }
    }
    return assoc;
}

namespace {

double throughput_impl(const Snapshot& snap, double h, const ChannelParams& ch,
                       const QoSParams& qos, bool interference) {
    const LinkReport rep = link_report(snap, h, ch, interference);
    const Association assoc = associate(rep, snap, h, qos);
    double sum = 0.0;
    for (std::size_t k = 0; k < rep.num_users; ++k)
        if (assoc.serving[k] != kUnserved)
            sum += rep.se(k, static_cast<std::size_t>(assoc.serving[k]));
    return sum;
}

}  // namespace

double throughput(const Snapshot& snap, double uav_altitude_m, const ChannelParams& ch,
                  const QoSParams& qos) {
    return throughput_impl(snap, uav_altitude_m, ch, qos, true);
}

double throughput_no_interference(const Snapshot& snap, double uav_altitude_m,
                                  const ChannelParams& ch, const QoSParams& qos) {
    return throughput_impl(snap, uav_altitude_m, ch, qos, false);
}

}  // namespace uavsim
