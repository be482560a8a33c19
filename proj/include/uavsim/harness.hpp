#ifndef UAVSIM_HARNESS_HPP
#define UAVSIM_HARNESS_HPP

#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "uavsim/baselines.hpp"
#include "uavsim/ddpg.hpp"
#include "uavsim/mdp_env.hpp"

namespace uavsim {

enum class SolverKind { Fixed, Anneal, Smooth, Oracle, Drl };

std::string solver_name(SolverKind s);

struct ScenarioConfig {
    AreaConfig area;
    int num_users{24};
    int num_uavs{2};
    UserDistribution dist;
    int num_slots{100};
};

struct BaselineConfig {
    std::vector<SolverKind> solvers{SolverKind::Fixed, SolverKind::Anneal, SolverKind::Smooth};
    FixedLayout fixed_layout{FixedLayout::Center};
    std::vector<Vec2> fixed_custom;
    AnnealConfig anneal;
    SmoothOptConfig smooth;
    int oracle_resolution{41};
};

enum class ExperimentKind { Train, Evaluate, SweepDensity, CompareDistributions };

struct RunConfig {
    ScenarioConfig scenario;
    ChannelParams channel;
    QoSParams qos;
    EnvConfig env;
    AgentConfig agent;
    BaselineConfig baseline;
    ExperimentKind experiment{ExperimentKind::Evaluate};
    std::string out_dir{"out"};
    std::string checkpoint;
    std::uint64_t master_seed{1};
    bool reproducible{false};
    int decide_epochs{-1};  // <0: use agent.epochs
    bool train_center_start{false};
    std::vector<int> sweep_k{4, 8, 16, 24};
};

struct ConfigError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Parses the flat [section] key=value run-config file, applies documented
/// defaults (each defaulted field is echoed through the log callback) and
/// validates. Throws ConfigError naming the offending field.
RunConfig load_config(const std::string& path,
                      const std::function<void(const std::string&)>& log = {});

struct SolverCell {
    double throughput{0.0};
    double wall_ms{0.0};
    int served{0};
    bool failed{false};
};

struct SlotResult {
    int time_slot{0};
    std::vector<SolverCell> cells;  // one per solver, same order as the solver list
};

/// Per-slot benchmark: users are resampled from the slot seed (identical
/// snapshot for every solver), each solver runs from its own warm state.
/// A solver failure is recorded in its cell and the run continues.
std::vector<SlotResult> run_timeline(const RunConfig& cfg, const std::vector<SolverKind>& solvers,
                                     DdpgAgent* agent);

struct Summary {
    std::vector<SolverKind> solvers;
    std::vector<double> mean_throughput;
    std::vector<std::vector<double>> fraction_better;  // [a][b]: slots where a strictly beats b
    double total_wall_ms{0.0};
};

Summary summarize(const std::vector<SolverKind>& solvers, const std::vector<SlotResult>& results);

struct SweepRow {
    int num_users{0};
    Summary summary;
};

std::vector<SweepRow> sweep_density(const RunConfig& cfg, const std::vector<int>& k_values,
                                    DdpgAgent* agent);

// CSV emission / ingestion (round-trip safe).
void write_slots_csv(const std::string& path, const std::vector<SolverKind>& solvers,
                     const std::vector<SlotResult>& results);
std::vector<SlotResult> read_slots_csv(const std::string& path, std::vector<SolverKind>& solvers);
void write_summary_csv(const std::string& path, const Summary& summary);
void write_training_log_csv(const std::string& path, const std::vector<EpisodeLog>& logs);

/// Per-slot RNG seed derived from the master seed (splitmix64 on slot index).
std::uint64_t derive_seed(std::uint64_t master, std::uint64_t stream);

}  // namespace uavsim

#endif  // UAVSIM_HARNESS_HPP
