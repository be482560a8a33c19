#ifndef UAVSIM_CHANNEL_HPP
#define UAVSIM_CHANNEL_HPP

#include <cmath>
#include <stdexcept>

namespace uavsim {

/// Air-to-ground channel constants. dB fields are entered in dB and
/// converted to linear internally (linear = 10^(dB/10)).
struct ChannelParams {
    double carrier_hz{2e9};
    double light_speed{3e8};
    double alpha_los{2.0};
    double alpha_nlos{3.0};
    double mu_los_db{1.0};
    double mu_nlos_db{0.0};
    double b_env{0.136};
    double c_env{11.95};
    double tx_power_w{1.0};
    double noise_psd_dbm_hz{-174.0};
    double bandwidth_hz{20e6};

    /// Noise power: PSD integrated over the full band, in watts.
    double noise_power_w() const {
        return std::pow(10.0, noise_psd_dbm_hz / 10.0) * 1e-3 * bandwidth_hz;
    }

    void validate() const {
        if (carrier_hz <= 0.0) throw std::invalid_argument("channel.carrier_hz must be > 0");
        if (light_speed <= 0.0) throw std::invalid_argument("channel.light_speed must be > 0");
        if (alpha_los < 2.0) throw std::invalid_argument("channel.alpha_los must be >= 2");
        if (alpha_nlos < alpha_los)
            throw std::invalid_argument("channel.alpha_nlos must be >= alpha_los");
        if (tx_power_w <= 0.0) throw std::invalid_argument("channel.tx_power_w must be > 0");
        if (bandwidth_hz <= 0.0) throw std::invalid_argument("channel.bandwidth_hz must be > 0");
        if (b_env <= 0.0) throw std::invalid_argument("channel.b_env must be > 0");
        if (c_env <= 0.0) throw std::invalid_argument("channel.c_env must be > 0");
    }
};

enum class LinkCondition { LOS, NLOS };

/// Elevation angle in degrees for a link of 3-D length r at altitude h.
/// Throws std::domain_error when r < h (geometrically impossible).
double elevation_angle_deg(double r, double h);

/// Sigmoid LOS probability as a function of the elevation angle.
double los_probability(double theta_deg, const ChannelParams& params);

/// Received-power gain (v/(4*pi*f))^2 / mu * r^(-alpha) for the given condition.
double path_gain(double r, LinkCondition condition, const ChannelParams& params);

/// LOS-probability-weighted average received power in watts.
double avg_received_power(double r, double h, const ChannelParams& params);

}  // namespace uavsim

#endif  // UAVSIM_CHANNEL_HPP
