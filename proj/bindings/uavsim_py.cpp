#include <pybind11/functional.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "uavsim/baselines.hpp"
#include "uavsim/ddpg.hpp"
#include "uavsim/harness.hpp"
#include "uavsim/mdp_env.hpp"

namespace py = pybind11;
using namespace uavsim;

PYBIND11_MODULE(uavsim, m) {
    m.doc() = "UAV base-station placement simulator and optimizer";

    py::class_<Vec2>(m, "Vec2")
        .def(py::init<>())
        .def(py::init([](double x, double y) { return Vec2{x, y}; }), py::arg("x"), py::arg("y"))
        .def_readwrite("x", &Vec2::x)
        .def_readwrite("y", &Vec2::y)
        .def("__repr__", [](const Vec2& v) {
            return "Vec2(" + std::to_string(v.x) + ", " + std::to_string(v.y) + ")";
        });

    py::class_<AreaConfig>(m, "AreaConfig")
        .def(py::init<>())
        .def_readwrite("width_m", &AreaConfig::width_m)
        .def_readwrite("height_m", &AreaConfig::height_m)
        .def_readwrite("uav_altitude_m", &AreaConfig::uav_altitude_m)
        .def("validate", &AreaConfig::validate);

    py::class_<Snapshot>(m, "Snapshot")
        .def(py::init<>())
        .def_readwrite("time_slot", &Snapshot::time_slot)
        .def_readwrite("user_xy", &Snapshot::user_xy)
        .def_readwrite("uav_xy", &Snapshot::uav_xy)
        .def_property_readonly("num_users", &Snapshot::num_users)
        .def_property_readonly("num_uavs", &Snapshot::num_uavs);

    py::enum_<DistKind>(m, "DistKind")
        .value("Uniform", DistKind::Uniform)
        .value("Gaussian", DistKind::Gaussian);

    py::class_<UserDistribution>(m, "UserDistribution")
        .def(py::init<>())
        .def_static("uniform", &UserDistribution::uniform)
        .def_static("gaussian", &UserDistribution::gaussian, py::arg("centers"),
                    py::arg("sigma_m"))
        .def_readwrite("kind", &UserDistribution::kind)
        .def_readwrite("gaussian_centers", &UserDistribution::gaussian_centers)
        .def_readwrite("gaussian_sigma_m", &UserDistribution::gaussian_sigma_m);

    m.def(
        "sample_users",
        [](const UserDistribution& dist, std::size_t k, const AreaConfig& area,
           std::uint64_t seed) {
            Rng rng(seed);
            return sample_users(dist, k, area, rng);
        },
        py::arg("dist"), py::arg("k"), py::arg("area"), py::arg("seed"));
    m.def("link_distance", &link_distance, py::arg("user"), py::arg("uav"), py::arg("h"));

    py::enum_<LinkCondition>(m, "LinkCondition")
        .value("LOS", LinkCondition::LOS)
        .value("NLOS", LinkCondition::NLOS);

    py::class_<ChannelParams>(m, "ChannelParams")
        .def(py::init<>())
        .def_readwrite("carrier_hz", &ChannelParams::carrier_hz)
        .def_readwrite("light_speed", &ChannelParams::light_speed)
        .def_readwrite("alpha_los", &ChannelParams::alpha_los)
        .def_readwrite("alpha_nlos", &ChannelParams::alpha_nlos)
        .def_readwrite("mu_los_db", &ChannelParams::mu_los_db)
        .def_readwrite("mu_nlos_db", &ChannelParams::mu_nlos_db)
        .def_readwrite("b_env", &ChannelParams::b_env)
        .def_readwrite("c_env", &ChannelParams::c_env)
        .def_readwrite("tx_power_w", &ChannelParams::tx_power_w)
        .def_readwrite("noise_psd_dbm_hz", &ChannelParams::noise_psd_dbm_hz)
        .def_readwrite("bandwidth_hz", &ChannelParams::bandwidth_hz)
        .def("noise_power_w", &ChannelParams::noise_power_w)
        .def("validate", &ChannelParams::validate);

    m.def("elevation_angle_deg", &elevation_angle_deg, py::arg("r"), py::arg("h"));
    m.def("los_probability", &los_probability, py::arg("theta_deg"), py::arg("params"));
    m.def("path_gain", &path_gain, py::arg("r"), py::arg("condition"), py::arg("params"));
    m.def("avg_received_power", &avg_received_power, py::arg("r"), py::arg("h"),
          py::arg("params"));

    py::class_<QoSParams>(m, "QoSParams")
        .def(py::init<>())
        .def_readwrite("rate_threshold_bpshz", &QoSParams::rate_threshold_bpshz)
        .def_readwrite("comm_radius_m", &QoSParams::comm_radius_m)
        .def("validate", &QoSParams::validate);

    m.def("throughput", &throughput, py::arg("snap"), py::arg("uav_altitude_m"), py::arg("ch"),
          py::arg("qos"));
    m.def("throughput_no_interference", &throughput_no_interference, py::arg("snap"),
          py::arg("uav_altitude_m"), py::arg("ch"), py::arg("qos"));

    py::enum_<RewardBaseline>(m, "RewardBaseline")
        .value("Zero", RewardBaseline::Zero)
        .value("Natural", RewardBaseline::Natural);

    py::class_<EnvConfig>(m, "EnvConfig")
        .def(py::init<>())
        .def_readwrite("a_max", &EnvConfig::a_max)
        .def_readwrite("epochs_per_episode", &EnvConfig::epochs_per_episode)
        .def_readwrite("baseline", &EnvConfig::baseline);

    py::class_<StepResult>(m, "StepResult")
        .def_readonly("next_state", &StepResult::next_state)
        .def_readonly("reward", &StepResult::reward)
        .def_readonly("throughput_now", &StepResult::throughput_now)
        .def_readonly("epoch", &StepResult::epoch);

    py::class_<PlacementEnv>(m, "PlacementEnv")
        .def(py::init<AreaConfig, ChannelParams, QoSParams, EnvConfig>(), py::arg("area"),
             py::arg("channel"), py::arg("qos"), py::arg("config"))
        .def("reset", &PlacementEnv::reset)
        .def("step", &PlacementEnv::step)
        .def("step_pretrain", &PlacementEnv::step_pretrain)
        .def("encode", &PlacementEnv::encode)
        .def("decode_uav_positions", &PlacementEnv::decode_uav_positions)
        .def("current_throughput", &PlacementEnv::current_throughput)
        .def("current_throughput_no_interference",
             &PlacementEnv::current_throughput_no_interference)
        .def_property_readonly("snapshot", &PlacementEnv::snapshot);

    py::class_<SolveResult>(m, "SolveResult")
        .def_readonly("placement", &SolveResult::placement)
        .def_readonly("throughput", &SolveResult::throughput);

    py::enum_<FixedLayout>(m, "FixedLayout")
        .value("Center", FixedLayout::Center)
        .value("Corners", FixedLayout::Corners)
        .value("Custom", FixedLayout::Custom);

    m.def("fixed_placement", &fixed_placement, py::arg("snap"), py::arg("area"),
          py::arg("layout"), py::arg("custom") = std::vector<Vec2>{});

    py::class_<AnnealConfig>(m, "AnnealConfig")
        .def(py::init<>())
        .def_readwrite("initial_temperature", &AnnealConfig::initial_temperature)
        .def_readwrite("cooling", &AnnealConfig::cooling)
        .def_readwrite("iterations", &AnnealConfig::iterations)
        .def_readwrite("neighbor_sigma_m", &AnnealConfig::neighbor_sigma_m)
        .def_readwrite("seed", &AnnealConfig::seed);

    m.def("simulated_annealing", &simulated_annealing, py::arg("snap"), py::arg("area"),
          py::arg("ch"), py::arg("qos"), py::arg("config"));

    py::class_<SmoothOptConfig>(m, "SmoothOptConfig")
        .def(py::init<>())
        .def_readwrite("sharpness_rate", &SmoothOptConfig::sharpness_rate)
        .def_readwrite("sharpness_dist", &SmoothOptConfig::sharpness_dist)
        .def_readwrite("step_m", &SmoothOptConfig::step_m)
        .def_readwrite("max_iterations", &SmoothOptConfig::max_iterations)
        .def_readwrite("restarts", &SmoothOptConfig::restarts)
        .def_readwrite("seed", &SmoothOptConfig::seed);

    m.def("smooth_opt", &smooth_opt, py::arg("snap"), py::arg("area"), py::arg("ch"),
          py::arg("qos"), py::arg("config"));
    m.def("grid_oracle", &grid_oracle, py::arg("snap"), py::arg("area"), py::arg("ch"),
          py::arg("qos"), py::arg("resolution"));

    py::class_<AgentConfig>(m, "AgentConfig")
        .def(py::init<>())
        .def_readwrite("gamma", &AgentConfig::gamma)
        .def_readwrite("batch_size", &AgentConfig::batch_size)
        .def_readwrite("sync_period", &AgentConfig::sync_period)
        .def_readwrite("tau", &AgentConfig::tau)
        .def_readwrite("episodes", &AgentConfig::episodes)
        .def_readwrite("epochs", &AgentConfig::epochs)
        .def_readwrite("noise_sigma_init", &AgentConfig::noise_sigma_init)
        .def_readwrite("noise_sigma_final", &AgentConfig::noise_sigma_final)
        .def_readwrite("noise_theta", &AgentConfig::noise_theta)
        .def_readwrite("pretrain_episodes", &AgentConfig::pretrain_episodes)
        .def_readwrite("updates_per_step", &AgentConfig::updates_per_step)
        .def_readwrite("symmetry_augment", &AgentConfig::symmetry_augment)
        .def_readwrite("nstep", &AgentConfig::nstep)
        .def_readwrite("buffer_capacity", &AgentConfig::buffer_capacity)
        .def_readwrite("hidden_sizes", &AgentConfig::hidden_sizes)
        .def_readwrite("learning_rate", &AgentConfig::learning_rate)
        .def_readwrite("actor_learning_rate", &AgentConfig::actor_learning_rate)
        .def_readwrite("actor_final_scale", &AgentConfig::actor_final_scale)
        .def_readwrite("normalize_states", &AgentConfig::normalize_states);

    py::class_<DdpgAgent>(m, "DdpgAgent")
        .def(py::init<std::size_t, std::size_t, double, const AgentConfig&, std::uint64_t>(),
             py::arg("state_dim"), py::arg("action_dim"), py::arg("a_max"), py::arg("config"),
             py::arg("seed"))
        .def("act", &DdpgAgent::act, py::arg("state"), py::arg("explore"))
        .def("save", &DdpgAgent::save)
        .def("load", &DdpgAgent::load)
        .def_property_readonly("state_dim", &DdpgAgent::state_dim)
        .def_property_readonly("action_dim", &DdpgAgent::action_dim)
        .def_property_readonly("a_max", &DdpgAgent::a_max);

    py::class_<EpisodeLog>(m, "EpisodeLog")
        .def_readonly("episode", &EpisodeLog::episode)
        .def_readonly("cumulative_reward", &EpisodeLog::cumulative_reward)
        .def_readonly("final_throughput", &EpisodeLog::final_throughput)
        .def_readonly("best_throughput", &EpisodeLog::best_throughput)
        .def_readonly("wall_ms", &EpisodeLog::wall_ms);

    py::class_<TrainSetup>(m, "TrainSetup")
        .def(py::init<>())
        .def_readwrite("area", &TrainSetup::area)
        .def_readwrite("channel", &TrainSetup::channel)
        .def_readwrite("qos", &TrainSetup::qos)
        .def_readwrite("env", &TrainSetup::env)
        .def_readwrite("dist", &TrainSetup::dist)
        .def_readwrite("num_users", &TrainSetup::num_users)
        .def_readwrite("num_uavs", &TrainSetup::num_uavs)
        .def_readwrite("agent", &TrainSetup::agent)
        .def_readwrite("seed", &TrainSetup::seed)
        .def_readwrite("record_wall_clock", &TrainSetup::record_wall_clock)
        .def_readwrite("center_start", &TrainSetup::center_start);

    m.def("train_agent", &train_agent, py::arg("setup"), py::arg("agent"),
          py::arg("on_episode") = std::function<void(const EpisodeLog&)>{});
    m.def("decide", &decide, py::arg("snap"), py::arg("agent"), py::arg("env"),
          py::arg("epochs"));

    m.def("derive_seed", &derive_seed, py::arg("master"), py::arg("stream"));
}
