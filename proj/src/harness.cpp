#include "uavsim/harness.hpp"

#include <algorithm>
#include <cctype>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <functional>
#include <memory>
#include <set>
#include <sstream>

namespace uavsim {

std::string solver_name(SolverKind s) {
    switch (s) {
        case SolverKind::Fixed: return "fixed";
        case SolverKind::Anneal: return "anneal";
        case SolverKind::Smooth: return "smooth";
        case SolverKind::Oracle: return "oracle";
        case SolverKind::Drl: return "drl";
    }
    return "?";
}

std::uint64_t derive_seed(std::uint64_t master, std::uint64_t stream) {
    // splitmix64
    std::uint64_t z = master + stream * 0x9e3779b97f4a7c15ull + 0x9e3779b97f4a7c15ull;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
    return z ^ (z >> 31);
}

namespace {

std::string trim(const std::string& s) {
    std::size_t a = s.find_first_not_of(" \t\r\n");
    if (a == std::string::npos) return "";
    std::size_t b = s.find_last_not_of(" \t\r\n");
    return s.substr(a, b - a + 1);
}

std::vector<std::string> split(const std::string& s, char sep) {
    std::vector<std::string> out;
    std::stringstream ss(s);
    std::string item;
    while (std::getline(ss, item, sep)) out.push_back(trim(item));
    return out;
}

std::string fmt_double(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

/// Flat [section] key=value file with '#' comments; no includes.
class IniFile {
public:
    explicit IniFile(const std::string& path) {
        std::ifstream is(path);
        if (!is) throw ConfigError("cannot open config file: " + path);
        std::string line, section;
        int lineno = 0;
        while (std::getline(is, line)) {
            ++lineno;
            const std::size_t hash = line.find('#');
            if (hash != std::string::npos) line = line.substr(0, hash);
            line = trim(line);
            if (line.empty()) continue;
            if (line.front() == '[') {
                if (line.back() != ']')
                    throw ConfigError("config line " + std::to_string(lineno) +
                                      ": malformed section header");
                section = trim(line.substr(1, line.size() - 2));
                continue;
            }
            const std::size_t eq = line.find('=');
            if (eq == std::string::npos)
                throw ConfigError("config line " + std::to_string(lineno) +
                                  ": expected key = value");
            values_[section + "." + trim(line.substr(0, eq))] = trim(line.substr(eq + 1));
        }
    }

    bool has(const std::string& key) const { return values_.count(key) > 0; }

    const std::map<std::string, std::string>& values() const { return values_; }

    std::string raw(const std::string& key) const { return values_.at(key); }

    void mark_used(const std::string& key) { used_.insert(key); }

    std::vector<std::string> unused() const {
        std::vector<std::string> out;
        for (const auto& [k, v] : values_)
            if (!used_.count(k)) out.push_back(k);
        return out;
    }

private:
    std::map<std::string, std::string> values_;
    std::set<std::string> used_;
};

class ConfigReader {
public:
    ConfigReader(IniFile& ini, const std::function<void(const std::string&)>& log)
        : ini_(ini), log_(log) {}

    double num(const std::string& key, double def) {
        if (!ini_.has(key)) {
            note_default(key, fmt_double(def));
            return def;
        }
        ini_.mark_used(key);
        try {
            return std::stod(ini_.raw(key));
        } catch (...) {
            throw ConfigError(key + ": not a number: " + ini_.raw(key));
        }
    }

    std::int64_t integer(const std::string& key, std::int64_t def) {
        if (!ini_.has(key)) {
            note_default(key, std::to_string(def));
            return def;
        }
        ini_.mark_used(key);
        try {
            return std::stoll(ini_.raw(key));
        } catch (...) {
            throw ConfigError(key + ": not an integer: " + ini_.raw(key));
        }
    }

    bool boolean(const std::string& key, bool def) {
        if (!ini_.has(key)) {
            note_default(key, def ? "true" : "false");
            return def;
        }
        ini_.mark_used(key);
        const std::string v = ini_.raw(key);
        if (v == "true" || v == "1") return true;
        if (v == "false" || v == "0") return false;
        throw ConfigError(key + ": expected true/false, got " + v);
    }

    std::string str(const std::string& key, const std::string& def) {
        if (!ini_.has(key)) {
            note_default(key, def);
            return def;
        }
        ini_.mark_used(key);
        return ini_.raw(key);
    }

    std::vector<int> int_list(const std::string& key, const std::vector<int>& def) {
        if (!ini_.has(key)) {
            std::string d;
            for (int v : def) d += (d.empty() ? "" : ",") + std::to_string(v);
            note_default(key, d);
            return def;
        }
        ini_.mark_used(key);
        std::vector<int> out;
        for (const std::string& tok : split(ini_.raw(key), ','))
            if (!tok.empty()) out.push_back(std::stoi(tok));
        return out;
    }

    /// "x,y; x,y" pairs
    std::vector<Vec2> vec2_list(const std::string& key) {
        if (!ini_.has(key)) return {};
        ini_.mark_used(key);
        std::vector<Vec2> out;
        for (const std::string& pair : split(ini_.raw(key), ';')) {
            if (pair.empty()) continue;
            const auto xy = split(pair, ',');
            if (xy.size() != 2) throw ConfigError(key + ": expected x,y pairs");
            out.push_back({std::stod(xy[0]), std::stod(xy[1])});
        }
        return out;
    }

private:
    void note_default(const std::string& key, const std::string& v) {
        if (log_) log_("config: using default " + key + " = " + v);
    }

    IniFile& ini_;
    const std::function<void(const std::string&)>& log_;
};

SolverKind parse_solver(const std::string& s) {
    if (s == "fixed") return SolverKind::Fixed;
    if (s == "anneal") return SolverKind::Anneal;
    if (s == "smooth") return SolverKind::Smooth;
    if (s == "oracle") return SolverKind::Oracle;
    if (s == "drl") return SolverKind::Drl;
    throw ConfigError("baseline.solvers: unknown solver '" + s + "'");
}

}  // namespace

RunConfig load_config(const std::string& path,
                      const std::function<void(const std::string&)>& log) {
    IniFile ini(path);
    ConfigReader r(ini, log);
    RunConfig cfg;

    cfg.scenario.area.width_m = r.num("scenario.area_width_m", 800.0);
    cfg.scenario.area.height_m = r.num("scenario.area_height_m", 800.0);
    cfg.scenario.area.uav_altitude_m = r.num("scenario.uav_altitude_m", 100.0);
    cfg.scenario.num_users = int(r.integer("scenario.num_users", 24));
    cfg.scenario.num_uavs = int(r.integer("scenario.num_uavs", 2));
    cfg.scenario.num_slots = int(r.integer("scenario.num_slots", 100));
    const std::string dist = r.str("scenario.distribution", "uniform");
    if (dist == "uniform") {
        cfg.scenario.dist = UserDistribution::uniform();
    } else if (dist == "gaussian") {
        std::vector<Vec2> centers = r.vec2_list("scenario.gaussian_centers");
        if (centers.empty())
            centers = {{cfg.scenario.area.width_m / 2.0, cfg.scenario.area.height_m / 2.0}};
        cfg.scenario.dist = UserDistribution::gaussian(
            centers, r.num("scenario.gaussian_sigma_m", cfg.scenario.area.width_m / 8.0));
    } else {
        throw ConfigError("scenario.distribution: expected uniform or gaussian, got " + dist);
    }

    cfg.channel.carrier_hz = r.num("channel.carrier_hz", 2e9);
    cfg.channel.light_speed = r.num("channel.light_speed", 3e8);
    cfg.channel.alpha_los = r.num("channel.alpha_los", 2.0);
    cfg.channel.alpha_nlos = r.num("channel.alpha_nlos", 3.0);
    cfg.channel.mu_los_db = r.num("channel.mu_los_db", 1.0);
    cfg.channel.mu_nlos_db = r.num("channel.mu_nlos_db", 0.0);
    cfg.channel.b_env = r.num("channel.b_env", 0.136);
    cfg.channel.c_env = r.num("channel.c_env", 11.95);
    cfg.channel.tx_power_w = r.num("channel.tx_power_w", 1.0);
    cfg.channel.noise_psd_dbm_hz = r.num("channel.noise_psd_dbm_hz", -174.0);
    cfg.channel.bandwidth_hz = r.num("channel.bandwidth_hz", 20e6);

    cfg.qos.rate_threshold_bpshz = r.num("qos.rate_threshold_bpshz", 2.5);
    cfg.qos.comm_radius_m = r.num("qos.comm_radius_m", 250.0);

    cfg.env.a_max = r.num("env.a_max", 5.0);
    cfg.env.epochs_per_episode = int(r.integer("env.epochs_per_episode", 800));
    const std::string baseline = r.str("env.reward_baseline", "zero");
    if (baseline == "zero") {
        cfg.env.baseline = RewardBaseline::Zero;
    } else if (baseline == "natural") {
        cfg.env.baseline = RewardBaseline::Natural;
    } else {
        throw ConfigError("env.reward_baseline: expected zero or natural, got " + baseline);
    }

    cfg.agent.gamma = r.num("agent.gamma", 0.9);
    cfg.agent.batch_size = int(r.integer("agent.batch_size", 64));
    cfg.agent.sync_period = int(r.integer("agent.sync_period", 200));
    cfg.agent.tau = r.num("agent.tau", 0.0);
    cfg.agent.episodes = int(r.integer("agent.episodes", 5000));
    cfg.agent.epochs = int(r.integer("agent.epochs", cfg.env.epochs_per_episode));
    cfg.agent.noise_sigma_init = r.num("agent.noise_sigma_init", 0.3);
    cfg.agent.noise_sigma_final = r.num("agent.noise_sigma_final", 0.02);
    cfg.agent.noise_theta = r.num("agent.noise_theta", 0.0);
    cfg.agent.pretrain_episodes = int(r.integer("agent.pretrain_episodes", 0));
    cfg.agent.updates_per_step = int(r.integer("agent.updates_per_step", 1));
    cfg.agent.symmetry_augment = r.boolean("agent.symmetry_augment", false);
    cfg.agent.nstep = int(r.integer("agent.nstep", 1));
    cfg.agent.buffer_capacity = std::size_t(r.integer("agent.buffer_capacity", 10'000'000));
    cfg.agent.hidden_sizes = r.int_list("agent.hidden_sizes", {256, 128, 64, 16});
    cfg.agent.learning_rate = r.num("agent.learning_rate", 1e-4);
    cfg.agent.actor_learning_rate = r.num("agent.actor_learning_rate", -1.0);
    cfg.agent.actor_final_scale = r.num("agent.actor_final_scale", 0.01);
    cfg.agent.normalize_states = r.boolean("agent.normalize_states", true);

    cfg.baseline.solvers.clear();
    for (const std::string& s : split(r.str("baseline.solvers", "fixed,anneal,smooth"), ','))
        if (!s.empty()) cfg.baseline.solvers.push_back(parse_solver(s));
    const std::string layout = r.str("baseline.fixed_layout", "center");
    if (layout == "center") {
        cfg.baseline.fixed_layout = FixedLayout::Center;
    } else if (layout == "corners") {
        cfg.baseline.fixed_layout = FixedLayout::Corners;
    } else if (layout == "custom") {
        cfg.baseline.fixed_layout = FixedLayout::Custom;
        cfg.baseline.fixed_custom = r.vec2_list("baseline.fixed_custom");
    } else {
        throw ConfigError("baseline.fixed_layout: expected center/corners/custom, got " + layout);
    }
    cfg.baseline.anneal.initial_temperature = r.num("baseline.anneal_initial_temperature", -1.0);
    cfg.baseline.anneal.cooling = r.num("baseline.anneal_cooling", 0.9995);
    cfg.baseline.anneal.iterations = int(r.integer("baseline.anneal_iterations", 5000));
    cfg.baseline.anneal.neighbor_sigma_m = r.num("baseline.anneal_neighbor_sigma_m", 60.0);
    cfg.baseline.smooth.sharpness_rate = r.num("baseline.smooth_sharpness_rate", 10.0);
    cfg.baseline.smooth.sharpness_dist = r.num("baseline.smooth_sharpness_dist", 10.0);
    cfg.baseline.smooth.step_m = r.num("baseline.smooth_step_m", 5.0);
    cfg.baseline.smooth.max_iterations = int(r.integer("baseline.smooth_max_iterations", 300));
    cfg.baseline.smooth.restarts = int(r.integer("baseline.smooth_restarts", 8));
    cfg.baseline.oracle_resolution = int(r.integer("baseline.oracle_resolution", 41));

    const std::string exp = r.str("run.experiment", "evaluate");
    if (exp == "train") {
        cfg.experiment = ExperimentKind::Train;
    } else if (exp == "evaluate") {
        cfg.experiment = ExperimentKind::Evaluate;
    } else if (exp == "sweep-density") {
        cfg.experiment = ExperimentKind::SweepDensity;
    } else if (exp == "compare-distributions") {
        cfg.experiment = ExperimentKind::CompareDistributions;
    } else {
        throw ConfigError("run.experiment: unknown experiment kind " + exp);
    }
    cfg.out_dir = r.str("run.out_dir", "out");
    cfg.checkpoint = r.str("run.checkpoint", "");
    cfg.master_seed = std::uint64_t(r.integer("run.master_seed", 1));
    cfg.reproducible = r.boolean("run.reproducible", false);
    cfg.decide_epochs = int(r.integer("run.decide_epochs", -1));
    cfg.train_center_start = r.boolean("run.train_center_start", false);
    cfg.sweep_k = r.int_list("run.sweep_k", {4, 8, 16, 24});

    const auto unused = ini.unused();
    if (!unused.empty()) throw ConfigError("unknown config key: " + unused.front());

    try {
        cfg.scenario.area.validate();
        cfg.scenario.dist.validate();
        cfg.channel.validate();
        cfg.qos.validate();
        cfg.env.validate();
        cfg.agent.validate();
        cfg.baseline.anneal.validate();
        cfg.baseline.smooth.validate();
    } catch (const std::invalid_argument& e) {
        throw ConfigError(e.what());
    }
    if (cfg.scenario.num_users < 1) throw ConfigError("scenario.num_users must be >= 1");
    if (cfg.scenario.num_uavs < 1) throw ConfigError("scenario.num_uavs must be >= 1");
    if (cfg.scenario.num_slots < 1) throw ConfigError("scenario.num_slots must be >= 1");
    return cfg;
}

namespace {

std::vector<SlotResult> run_timeline_users(const RunConfig& cfg,
                                           const std::vector<SolverKind>& solvers,
                                           const std::vector<std::vector<Vec2>>& slot_users,
                                           DdpgAgent* agent) {
    const AreaConfig& area = cfg.scenario.area;
    const std::vector<Vec2> initial =
        fixed_placement(Snapshot{0, {}, std::vector<Vec2>(std::size_t(cfg.scenario.num_uavs))},
                        area, FixedLayout::Center);

    // each solver carries its own warm placement across slots
    std::vector<std::vector<Vec2>> warm(solvers.size(), initial);
    std::unique_ptr<PlacementEnv> env;
    if (agent) env = std::make_unique<PlacementEnv>(area, cfg.channel, cfg.qos, cfg.env);
    const int decide_epochs = cfg.decide_epochs > 0 ? cfg.decide_epochs : cfg.agent.epochs;

    std::vector<SlotResult> results;
    for (std::size_t slot = 0; slot < slot_users.size(); ++slot) {
        SlotResult row;
        row.time_slot = int(slot);
        for (std::size_t si = 0; si < solvers.size(); ++si) {
            Snapshot snap;
            snap.time_slot = std::int64_t(slot);
            snap.user_xy = slot_users[slot];
            snap.uav_xy = warm[si];

            SolverCell cell;
            const auto t0 = std::chrono::steady_clock::now();
            try {
                std::vector<Vec2> placement;
                switch (solvers[si]) {
                    case SolverKind::Fixed:
                        placement = fixed_placement(snap, area, cfg.baseline.fixed_layout,
                                                    cfg.baseline.fixed_custom);
                        break;
                    case SolverKind::Anneal: {
                        AnnealConfig ac = cfg.baseline.anneal;
                        ac.seed = derive_seed(cfg.master_seed, 1000 + slot * 16 + si);
                        placement =
                            simulated_annealing(snap, area, cfg.channel, cfg.qos, ac).placement;
                        break;
                    }
                    case SolverKind::Smooth: {
                        SmoothOptConfig sc = cfg.baseline.smooth;
                        sc.seed = derive_seed(cfg.master_seed, 2000 + slot * 16 + si);
                        placement = smooth_opt(snap, area, cfg.channel, cfg.qos, sc).placement;
                        break;
                    }
                    case SolverKind::Oracle:
                        placement = grid_oracle(snap, area, cfg.channel, cfg.qos,
                                                cfg.baseline.oracle_resolution)
                                        .placement;
                        break;
                    case SolverKind::Drl: {
                        if (!agent)
                            throw std::runtime_error("drl solver needs a trained checkpoint");
                        placement = decide(snap, *agent, *env, decide_epochs).first;
                        break;
                    }
                }
                Snapshot final_snap = snap;
                final_snap.uav_xy = placement;
                cell.throughput = throughput(final_snap, area.uav_altitude_m, cfg.channel, cfg.qos);
                const LinkReport rep = link_report(final_snap, area.uav_altitude_m, cfg.channel);
                cell.served =
                    int(associate(rep, final_snap, area.uav_altitude_m, cfg.qos).served_count());
                warm[si] = placement;
            } catch (const std::exception&) {
                cell.failed = true;
            }
            if (!cfg.reproducible)
                cell.wall_ms = std::chrono::duration<double, std::milli>(
                                   std::chrono::steady_clock::now() - t0)
                                   .count();
            row.cells.push_back(cell);
        }
        results.push_back(std::move(row));
    }
    return results;
}

std::vector<std::vector<Vec2>> sample_slot_users(const RunConfig& cfg, int num_users) {
    std::vector<std::vector<Vec2>> out;
    for (int slot = 0; slot < cfg.scenario.num_slots; ++slot) {
        Rng rng(derive_seed(cfg.master_seed, std::uint64_t(slot)));
        out.push_back(sample_users(cfg.scenario.dist, std::size_t(num_users), cfg.scenario.area,
                                   rng));
    }
    return out;
}

}  // namespace

std::vector<SlotResult> run_timeline(const RunConfig& cfg, const std::vector<SolverKind>& solvers,
                                     DdpgAgent* agent) {
    return run_timeline_users(cfg, solvers, sample_slot_users(cfg, cfg.scenario.num_users), agent);
}

Summary summarize(const std::vector<SolverKind>& solvers,
                  const std::vector<SlotResult>& results) {
    if (results.empty()) throw std::invalid_argument("summarize: empty results");
    Summary s;
    s.solvers = solvers;
    const std::size_t n = solvers.size();
    s.mean_throughput.assign(n, 0.0);
    s.fraction_better.assign(n, std::vector<double>(n, 0.0));
    for (const SlotResult& row : results) {
        for (std::size_t a = 0; a < n; ++a) {
            s.mean_throughput[a] += row.cells[a].throughput / double(results.size());
            s.total_wall_ms += row.cells[a].wall_ms;
            for (std::size_t b = 0; b < n; ++b)
                if (row.cells[a].throughput > row.cells[b].throughput)  // ties count for neither
                    s.fraction_better[a][b] += 1.0 / double(results.size());
        }
    }
    return s;
}

std::vector<SweepRow> sweep_density(const RunConfig& cfg, const std::vector<int>& k_values,
                                    DdpgAgent* agent) {
    if (k_values.empty()) throw std::invalid_argument("sweep_density: empty k_values");
    const int max_k = *std::max_element(k_values.begin(), k_values.end());
    // nested user sets: same slot seeds, the first k of max_k draws
    const auto full = sample_slot_users(cfg, max_k);
    std::vector<SweepRow> rows;
    for (int k : k_values) {
        std::vector<std::vector<Vec2>> users;
        for (const auto& slot : full)
            users.emplace_back(slot.begin(), slot.begin() + std::min<std::size_t>(
                                                               std::size_t(k), slot.size()));
        SweepRow row;
        row.num_users = k;
        row.summary =
            summarize(cfg.baseline.solvers, run_timeline_users(cfg, cfg.baseline.solvers, users,
                                                               agent));
        rows.push_back(std::move(row));
    }
    return rows;
}

void write_slots_csv(const std::string& path, const std::vector<SolverKind>& solvers,
                     const std::vector<SlotResult>& results) {
    std::ofstream os(path);
    if (!os) throw std::runtime_error("cannot open " + path + " for writing");
    os << "time_slot";
    for (SolverKind s : solvers) {
        const std::string n = solver_name(s);
        os << "," << n << "_throughput," << n << "_wall_ms," << n << "_served," << n << "_failed";
    }
    os << "\n";
    for (const SlotResult& row : results) {
        os << row.time_slot;
        for (const SolverCell& c : row.cells)
            os << "," << fmt_double(c.throughput) << "," << fmt_double(c.wall_ms) << ","
               << c.served << "," << (c.failed ? 1 : 0);
        os << "\n";
    }
}

std::vector<SlotResult> read_slots_csv(const std::string& path,
                                       std::vector<SolverKind>& solvers) {
    std::ifstream is(path);
    if (!is) throw std::runtime_error("cannot open " + path);
    std::string header;
    if (!std::getline(is, header)) throw std::runtime_error(path + ": empty file");
    solvers.clear();
    const auto cols = split(header, ',');
    for (std::size_t i = 1; i < cols.size(); i += 4) {
        const std::string name = cols[i].substr(0, cols[i].rfind("_throughput"));
        for (SolverKind k : {SolverKind::Fixed, SolverKind::Anneal, SolverKind::Smooth,
                             SolverKind::Oracle, SolverKind::Drl})
            if (solver_name(k) == name) solvers.push_back(k);
    }
    std::vector<SlotResult> out;
    std::string line;
    while (std::getline(is, line)) {
        if (trim(line).empty()) continue;
        const auto f = split(line, ',');
        SlotResult row;
        row.time_slot = std::stoi(f[0]);
        for (std::size_t i = 1; i + 3 < f.size(); i += 4) {
            SolverCell c;
            c.throughput = std::stod(f[i]);
            c.wall_ms = std::stod(f[i + 1]);
            c.served = std::stoi(f[i + 2]);
            c.failed = f[i + 3] == "1";
            row.cells.push_back(c);
        }
        out.push_back(std::move(row));
    }
    return out;
}

void write_summary_csv(const std::string& path, const Summary& summary) {
    std::ofstream os(path);
    if (!os) throw std::runtime_error("cannot open " + path + " for writing");
    os << "kind,solver_a,solver_b,value\n";
    for (std::size_t a = 0; a < summary.solvers.size(); ++a)
        os << "mean_throughput," << solver_name(summary.solvers[a]) << ",,"
           << fmt_double(summary.mean_throughput[a]) << "\n";
    for (std::size_t a = 0; a < summary.solvers.size(); ++a)
        for (std::size_t b = 0; b < summary.solvers.size(); ++b)
            if (a != b)
                os << "fraction_better," << solver_name(summary.solvers[a]) << ","
                   << solver_name(summary.solvers[b]) << ","
                   << fmt_double(summary.fraction_better[a][b]) << "\n";
    os << "total_wall_ms,,," << fmt_double(summary.total_wall_ms) << "\n";
}

void write_training_log_csv(const std::string& path, const std::vector<EpisodeLog>& logs) {
    std::ofstream os(path);
    if (!os) throw std::runtime_error("cannot open " + path + " for writing");
    os << "episode,cumulative_reward,final_throughput,best_throughput,wall_ms\n";
    for (const EpisodeLog& l : logs)
        os << l.episode << "," << fmt_double(l.cumulative_reward) << ","
           << fmt_double(l.final_throughput) << "," << fmt_double(l.best_throughput) << ","
           << fmt_double(l.wall_ms) << "\n";
}

}  // namespace uavsim
