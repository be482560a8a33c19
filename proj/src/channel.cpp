#include "uavsim/channel.hpp"

#include <numbers>

namespace uavsim {

double elevation_angle_deg(double r, double h) {
    if (h <= 0.0) throw std::domain_error("elevation_angle_deg: h must be > 0");
    if (r < h) throw std::domain_error("elevation_angle_deg: r < h is geometrically impossible");
    return 180.0 / std::numbers::pi * std::asin(h / r);
}

double los_probability(double theta_deg, const ChannelParams& params) {
    return 1.0 / (1.0 + params.c_env * std::exp(-params.b_env * (theta_deg - params.c_env)));
}

double path_gain(double r, LinkCondition condition, const ChannelParams& params) {
    if (r <= 0.0) throw std::invalid_argument("path_gain: r must be > 0");
    const double mu_db = condition == LinkCondition::LOS ? params.mu_los_db : params.mu_nlos_db;
    const double alpha = condition == LinkCondition::LOS ? params.alpha_los : params.alpha_nlos;
    const double mu_lin = std::pow(10.0, mu_db / 10.0);
    const double fs = params.light_speed / (4.0 * std::numbers::pi * params.carrier_hz);
    return fs * fs / mu_lin * std::pow(r, -alpha);
}

double avg_received_power(double r, double h, const ChannelParams& params) {
    const double theta = elevation_angle_deg(r, h);
    const double p_los = los_probability(theta, params);
    return params.tx_power_w * (p_los * path_gain(r, LinkCondition::LOS, params) +
                                (1.0 - p_los) * path_gain(r, LinkCondition::NLOS, params));
}

}  // namespace uavsim
