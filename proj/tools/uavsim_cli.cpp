#include <CLI11.hpp>

#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>

#include "uavsim/harness.hpp"

namespace fs = std::filesystem;
using namespace uavsim;

namespace {

struct CommonArgs {
    std::string config_path;
    std::optional<std::uint64_t> seed;
    std::optional<std::string> out;
};

void add_common(CLI::App* sub, CommonArgs& args) {
    sub->add_option("--config", args.config_path, "run-config file")->required();
    sub->add_option("--seed", args.seed, "master seed override");
    sub->add_option("--out", args.out, "output directory override");
}

RunConfig load(const CommonArgs& args) {
    RunConfig cfg = load_config(args.config_path,
                                [](const std::string& msg) { std::cerr << msg << "\n"; });
    if (args.seed) cfg.master_seed = *args.seed;
    if (args.out) cfg.out_dir = *args.out;
    fs::create_directories(cfg.out_dir);
    return cfg;
}

std::optional<DdpgAgent> load_agent_if_needed(const RunConfig& cfg,
                                              const std::vector<SolverKind>& solvers) {
    const bool wants_drl =
        std::find(solvers.begin(), solvers.end(), SolverKind::Drl) != solvers.end();
    if (!wants_drl) return std::nullopt;
    if (cfg.checkpoint.empty())
        throw std::runtime_error("drl solver selected but run.checkpoint is not set");
    DdpgAgent agent(1, 1, cfg.env.a_max, cfg.agent, cfg.master_seed);
    agent.load(cfg.checkpoint);
    return agent;
}

int cmd_train(const CommonArgs& args) {
    RunConfig cfg = load(args);
    TrainSetup setup;
    setup.area = cfg.scenario.area;
    setup.channel = cfg.channel;
    setup.qos = cfg.qos;
    setup.env = cfg.env;
    setup.dist = cfg.scenario.dist;
    setup.num_users = cfg.scenario.num_users;
    setup.num_uavs = cfg.scenario.num_uavs;
    setup.agent = cfg.agent;
    setup.seed = cfg.master_seed;
    setup.record_wall_clock = !cfg.reproducible;
    setup.center_start = cfg.train_center_start;

    const std::size_t state_dim =
        std::size_t(cfg.scenario.num_users) * 3 + std::size_t(cfg.scenario.num_uavs) * 2;
    const std::size_t action_dim = std::size_t(cfg.scenario.num_uavs) * 2;
    DdpgAgent agent(state_dim, action_dim, cfg.env.a_max, cfg.agent, cfg.master_seed);

    const auto logs = train_agent(setup, agent, [](const EpisodeLog& l) {
        if (l.episode % 10 == 0)
            std::cerr << "episode " << l.episode << " reward " << l.cumulative_reward
                      << " best_tp " << l.best_throughput << "\n";
    });
    write_training_log_csv((fs::path(cfg.out_dir) / "training_log.csv").string(), logs);
    agent.save((fs::path(cfg.out_dir) / "checkpoint.bin").string());
    std::cerr << "trained " << logs.size() << " episodes, checkpoint written to " << cfg.out_dir
              << "\n";
    return 0;
}

int cmd_evaluate(const CommonArgs& args) {
    RunConfig cfg = load(args);
    const auto& solvers = cfg.baseline.solvers;
    auto agent = load_agent_if_needed(cfg, solvers);
    const auto results = run_timeline(cfg, solvers, agent ? &*agent : nullptr);
    write_slots_csv((fs::path(cfg.out_dir) / "slots.csv").string(), solvers, results);
    write_summary_csv((fs::path(cfg.out_dir) / "summary.csv").string(),
                      summarize(solvers, results));
    return 0;
}

int cmd_sweep(const CommonArgs& args) {
    RunConfig cfg = load(args);
    auto agent = load_agent_if_needed(cfg, cfg.baseline.solvers);
    const auto rows = sweep_density(cfg, cfg.sweep_k, agent ? &*agent : nullptr);
    std::ofstream os((fs::path(cfg.out_dir) / "sweep.csv").string());
    os << "num_users,solver,mean_throughput\n";
    for (const SweepRow& row : rows)
        for (std::size_t i = 0; i < row.summary.solvers.size(); ++i)
            os << row.num_users << "," << solver_name(row.summary.solvers[i]) << ","
               << row.summary.mean_throughput[i] << "\n";
    return 0;
}

int cmd_oracle_check(const CommonArgs& args) {
    RunConfig cfg = load(args);
    // compare the configured solvers against the grid oracle slot by slot
    std::vector<SolverKind> solvers = cfg.baseline.solvers;
    if (std::find(solvers.begin(), solvers.end(), SolverKind::Oracle) == solvers.end())
        solvers.push_back(SolverKind::Oracle);
    auto agent = load_agent_if_needed(cfg, solvers);
    const auto results = run_timeline(cfg, solvers, agent ? &*agent : nullptr);
    const std::size_t oi =
        std::size_t(std::find(solvers.begin(), solvers.end(), SolverKind::Oracle) -
                    solvers.begin());
    std::ofstream os((fs::path(cfg.out_dir) / "oracle_check.csv").string());
    os << "time_slot,solver,throughput,oracle_throughput,ratio\n";
    for (const SlotResult& row : results)
        for (std::size_t i = 0; i < solvers.size(); ++i) {
            if (i == oi) continue;
            const double oracle_tp = row.cells[oi].throughput;
            os << row.time_slot << "," << solver_name(solvers[i]) << ","
               << row.cells[i].throughput << "," << oracle_tp << ","
               << (oracle_tp > 0.0 ? row.cells[i].throughput / oracle_tp : 0.0) << "\n";
        }
    write_slots_csv((fs::path(cfg.out_dir) / "slots.csv").string(), solvers, results);
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"UAV base-station placement simulator and optimizer suite"};
    app.require_subcommand(1);

    CommonArgs train_args, eval_args, sweep_args, oracle_args;
    CLI::App* train = app.add_subcommand("train", "train the DDPG placement agent");
    add_common(train, train_args);
    CLI::App* evaluate = app.add_subcommand("evaluate", "benchmark solvers over a timeline");
    add_common(evaluate, eval_args);
    CLI::App* sweep = app.add_subcommand("sweep", "throughput vs user density");
    add_common(sweep, sweep_args);
    CLI::App* oracle = app.add_subcommand("oracle-check", "compare solvers to the grid oracle");
    add_common(oracle, oracle_args);

    CLI11_PARSE(app, argc, argv);
    try {
        if (train->parsed()) return cmd_train(train_args);
        if (evaluate->parsed()) return cmd_evaluate(eval_args);
        if (sweep->parsed()) return cmd_sweep(sweep_args);
        if (oracle->parsed()) return cmd_oracle_check(oracle_args);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
