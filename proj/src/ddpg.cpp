#include "uavsim/ddpg.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <fstream>
#include <iostream>

namespace uavsim {

namespace {

constexpr char kCheckpointMagic[8] = {'U', 'A', 'V', 'C', 'K', 'P', 'T', '1'};

void accumulate(Gradients& total, const Gradients& g, double scale) {
    if (total.dw.empty()) {
        total.dw.resize(g.dw.size());
        total.db.resize(g.db.size());
        for (std::size_t l = 0; l < g.dw.size(); ++l) {
            total.dw[l].assign(g.dw[l].size(), 0.0);
            total.db[l].assign(g.db[l].size(), 0.0);
        }
    }
    for (std::size_t l = 0; l < g.dw.size(); ++l) {
        for (std::size_t i = 0; i < g.dw[l].size(); ++i) total.dw[l][i] += scale * g.dw[l][i];
        for (std::size_t i = 0; i < g.db[l].size(); ++i) total.db[l][i] += scale * g.db[l][i];
    }
}

// Relabels one transition under a random permutation of user indices and a
// random permutation of UAV indices. State layout: 2K user coords, 2P UAV
// coords, K association codes with code (serving+1)/P.
Transition permute_transition(const Transition& tr, std::size_t k_n, std::size_t p_n, Rng& rng) {
    std::vector<std::size_t> uperm(k_n), qperm(p_n);
    for (std::size_t i = 0; i < k_n; ++i) uperm[i] = i;
    for (std::size_t p = 0; p < p_n; ++p) qperm[p] = p;
    std::shuffle(uperm.begin(), uperm.end(), rng);
    std::shuffle(qperm.begin(), qperm.end(), rng);

    Transition out = tr;
    const auto apply = [&](const EnvState& s, EnvState& d) {
        for (std::size_t i = 0; i < k_n; ++i) {
            d[2 * uperm[i]] = s[2 * i];
            d[2 * uperm[i] + 1] = s[2 * i + 1];
        }
        for (std::size_t p = 0; p < p_n; ++p) {
            d[2 * k_n + 2 * qperm[p]] = s[2 * k_n + 2 * p];
            d[2 * k_n + 2 * qperm[p] + 1] = s[2 * k_n + 2 * p + 1];
        }
        for (std::size_t i = 0; i < k_n; ++i) {
            const double code = s[2 * k_n + 2 * p_n + i];
            double relabeled = 0.0;
            if (code > 0.0) {
                const std::size_t serving =
                    std::size_t(std::lround(code * double(p_n))) - 1;
                relabeled = double(qperm[serving] + 1) / double(p_n);
            }
            d[2 * k_n + 2 * p_n + uperm[i]] = relabeled;
        }
    };
    apply(tr.state, out.state);
    apply(tr.next_state, out.next_state);
    for (std::size_t p = 0; p < p_n; ++p) {
        out.action[2 * qperm[p]] = tr.action[2 * p];
        out.action[2 * qperm[p] + 1] = tr.action[2 * p + 1];
    }
    return out;
}

}  // namespace

void ReplayBuffer::push(Transition t) {
    if (capacity_ == 0) return;
    if (data_.size() < capacity_) {
        data_.push_back(std::move(t));
    } else {
        data_[head_] = std::move(t);
        head_ = (head_ + 1) % capacity_;
    }
}

const Transition& ReplayBuffer::at(std::size_t i) const {
    if (i >= data_.size()) throw std::out_of_range("ReplayBuffer::at");
    if (data_.size() < capacity_) return data_[i];
    return data_[(head_ + i) % capacity_];
}

std::vector<const Transition*> ReplayBuffer::sample(std::size_t batch, Rng& rng) const {
    if (data_.empty()) throw std::logic_error("ReplayBuffer::sample on empty buffer");
    std::uniform_int_distribution<std::size_t> pick(0, data_.size() - 1);
    std::vector<const Transition*> out;
    out.reserve(batch);
    for (std::size_t i = 0; i < batch; ++i) out.push_back(&data_[pick(rng)]);
    return out;
}

DdpgAgent::DdpgAgent(std::size_t state_dim, std::size_t action_dim, double a_max,
                     const AgentConfig& cfg, std::uint64_t seed)
    : state_dim_(state_dim), action_dim_(action_dim), a_max_(a_max), cfg_(cfg),
      normalizer_(state_dim), rng_(seed) {
    cfg_.validate();
    if (a_max_ <= 0.0) throw std::invalid_argument("DdpgAgent: a_max must be > 0");

    actor_spec_.layer_sizes.push_back(int(state_dim_));
    for (int h : cfg_.hidden_sizes) actor_spec_.layer_sizes.push_back(h);
    actor_spec_.layer_sizes.push_back(int(action_dim_));
    actor_spec_.output_activation = Activation::Tanh;

    critic_spec_.layer_sizes.push_back(int(state_dim_ + action_dim_));
    for (int h : cfg_.hidden_sizes) critic_spec_.layer_sizes.push_back(h);
    critic_spec_.layer_sizes.push_back(1);
    critic_spec_.output_activation = Activation::Linear;

    actor_ = init_weights(actor_spec_, rng_, cfg_.actor_final_scale);
    critic_ = init_weights(critic_spec_, rng_);
    target_actor_ = actor_;
    target_critic_ = critic_;
    actor_adam_ = make_adam_state(
        actor_, cfg_.actor_learning_rate > 0.0 ? cfg_.actor_learning_rate : cfg_.learning_rate);
    critic_adam_ = make_adam_state(critic_, cfg_.learning_rate);
    noise_sigma_ = cfg_.noise_sigma_init;
}

std::vector<double> DdpgAgent::preprocess(const EnvState& state) const {
    if (state.size() != state_dim_) throw std::invalid_argument("agent: state length mismatch");
    if (cfg_.normalize_states) return normalizer_.normalize(state);
    return state;
}

void DdpgAgent::observe_state(const EnvState& state) {
    if (cfg_.normalize_states) normalizer_.update(state);
}

double DdpgAgent::critic_eval(const MlpWeights& critic, std::span<const double> x,
                              std::span<const double> t, ForwardCache* cache) const {
    std::vector<double> in;
    in.reserve(x.size() + t.size());
    in.insert(in.end(), x.begin(), x.end());
    in.insert(in.end(), t.begin(), t.end());
    return forward(critic, critic_spec_, in, cache)[0];
}

EnvAction DdpgAgent::act(const EnvState& state, bool explore) {
    const std::vector<double> x = preprocess(state);
    const std::vector<double> t = forward(actor_, actor_spec_, x);
    EnvAction a(action_dim_);
    for (std::size_t i = 0; i < action_dim_; ++i) a[i] = a_max_ * t[i];
    if (explore && noise_sigma_ > 0.0) {
        if (cfg_.noise_theta > 0.0) {
            // discrete OU with stationary std noise_sigma_ * a_max
            if (ou_state_.size() != action_dim_) ou_state_.assign(action_dim_, 0.0);
            const double th = cfg_.noise_theta;
            std::normal_distribution<double> n(
                0.0, std::sqrt(th * (2.0 - th)) * noise_sigma_ * a_max_);
            for (std::size_t i = 0; i < action_dim_; ++i) {
                ou_state_[i] = (1.0 - th) * ou_state_[i] + n(rng_);
                a[i] = std::clamp(a[i] + ou_state_[i], -a_max_, a_max_);
            }
        } else {
            std::normal_distribution<double> n(0.0, noise_sigma_ * a_max_);
            for (double& ai : a) ai = std::clamp(ai + n(rng_), -a_max_, a_max_);
        }
    }
    return a;
}

std::vector<double> DdpgAgent::td_target(const std::vector<const Transition*>& batch) const {
    std::vector<double> y;
    y.reserve(batch.size());
    for (const Transition* tr : batch) {
        const std::vector<double> x2 = preprocess(tr->next_state);
        const std::vector<double> t2 = forward(target_actor_, actor_spec_, x2);
        const double q2 = critic_eval(target_critic_, x2, t2);
        const double g = tr->bootstrap_discount >= 0.0 ? tr->bootstrap_discount : cfg_.gamma;
        y.push_back(tr->reward + g * q2);
    }
    return y;
}

double DdpgAgent::train_critic(const std::vector<const Transition*>& batch,
                               const std::vector<double>& targets) {
    if (batch.empty()) throw std::invalid_argument("train_critic: empty batch");
    if (batch.size() != targets.size())
        throw std::invalid_argument("train_critic: batch/target size mismatch");

    Gradients total;
    double loss = 0.0;
    const double inv_n = 1.0 / double(batch.size());
    for (std::size_t j = 0; j < batch.size(); ++j) {
        const Transition* tr = batch[j];
        const std::vector<double> x = preprocess(tr->state);
        std::vector<double> t(action_dim_);
        for (std::size_t i = 0; i < action_dim_; ++i) t[i] = tr->action[i] / a_max_;
        ForwardCache cache;
        const double q = critic_eval(critic_, x, t, &cache);
        const double err = q - targets[j];
        loss += err * err * inv_n;
        const double dq[1] = {2.0 * err * inv_n};
        accumulate(total, backward(critic_, critic_spec_, cache, dq), 1.0);
    }
    if (!std::isfinite(loss)) throw std::runtime_error("train_critic: non-finite loss");
    adam_step(critic_, total, critic_adam_);
    return loss;
}

double DdpgAgent::train_actor(const std::vector<const Transition*>& batch) {
    if (batch.empty()) throw std::invalid_argument("train_actor: empty batch");

    Gradients total;
    double mean_q = 0.0;
    const double inv_n = 1.0 / double(batch.size());
    for (const Transition* tr : batch) {
        const std::vector<double> x = preprocess(tr->state);
        ForwardCache actor_cache;
        const std::vector<double> t = forward(actor_, actor_spec_, x, &actor_cache);
        ForwardCache critic_cache;
        const double q = critic_eval(critic_, x, t, &critic_cache);
        mean_q += q * inv_n;

        const double dq[1] = {inv_n};
        const Gradients cg = backward(critic_, critic_spec_, critic_cache, dq);
        // ascent on Q: feed the negated action-input gradient to the minimizer
        std::vector<double> dt(action_dim_);
        for (std::size_t i = 0; i < action_dim_; ++i)
            dt[i] = -cg.input_grad[state_dim_ + i];
        accumulate(total, backward(actor_, actor_spec_, actor_cache, dt), 1.0);
    }
    adam_step(actor_, total, actor_adam_);
    return mean_q;
}

void DdpgAgent::sync_targets() {
    hard_sync(target_actor_, actor_);
    hard_sync(target_critic_, critic_);
}

void DdpgAgent::soft_sync_targets(double tau) {
    const auto blend = [tau](MlpWeights& target, const MlpWeights& online) {
        for (std::size_t l = 0; l < online.w.size(); ++l) {
            for (std::size_t i = 0; i < online.w[l].size(); ++i)
                target.w[l][i] += tau * (online.w[l][i] - target.w[l][i]);
            for (std::size_t i = 0; i < online.b[l].size(); ++i)
                target.b[l][i] += tau * (online.b[l][i] - target.b[l][i]);
        }
    };
    blend(target_actor_, actor_);
    blend(target_critic_, critic_);
}

void DdpgAgent::save(const std::string& path) const {
    std::ofstream os(path, std::ios::binary);
    if (!os) throw std::runtime_error("checkpoint: cannot open " + path + " for writing");
    os.write(kCheckpointMagic, sizeof kCheckpointMagic);
    const std::int64_t dims[2] = {std::int64_t(state_dim_), std::int64_t(action_dim_)};
    os.write(reinterpret_cast<const char*>(dims), sizeof dims);
    os.write(reinterpret_cast<const char*>(&a_max_), sizeof a_max_);
    write_mlp(os, actor_spec_, actor_);
    write_mlp(os, critic_spec_, critic_);
    write_mlp(os, actor_spec_, target_actor_);
    write_mlp(os, critic_spec_, target_critic_);
    write_adam(os, actor_adam_);
    write_adam(os, critic_adam_);
    write_normalizer(os, normalizer_);
    if (!os) throw std::runtime_error("checkpoint: write failed for " + path);
}

void DdpgAgent::load(const std::string& path) {
    std::ifstream is(path, std::ios::binary);
    if (!is) throw std::runtime_error("checkpoint: cannot open " + path);
    char magic[8];
    is.read(magic, sizeof magic);
    if (!is || !std::equal(magic, magic + 8, kCheckpointMagic))
        throw std::runtime_error("checkpoint: bad magic in " + path);
    std::int64_t dims[2];
    is.read(reinterpret_cast<char*>(dims), sizeof dims);
    is.read(reinterpret_cast<char*>(&a_max_), sizeof a_max_);
    if (!is) throw std::runtime_error("checkpoint: truncated header in " + path);
    state_dim_ = std::size_t(dims[0]);
    action_dim_ = std::size_t(dims[1]);
    MlpSpec as, cs;
    read_mlp(is, as, actor_);
    read_mlp(is, cs, critic_);
    MlpSpec tmp;
    read_mlp(is, tmp, target_actor_);
    read_mlp(is, tmp, target_critic_);
    actor_spec_ = as;
    critic_spec_ = cs;
    read_adam(is, actor_adam_);
    read_adam(is, critic_adam_);
    read_normalizer(is, normalizer_);
}

std::vector<EpisodeLog> train_agent(const TrainSetup& setup, DdpgAgent& agent,
                                    const std::function<void(const EpisodeLog&)>& on_episode) {
    const AgentConfig& cfg = agent.config();
    PlacementEnv env(setup.area, setup.channel, setup.qos, setup.env);
    ReplayBuffer buffer(cfg.buffer_capacity);
    Rng world_rng(setup.seed);
    Rng sample_rng(setup.seed ^ 0x9e3779b97f4a7c15ull);

    const double sigma0 = cfg.noise_sigma_init;
    const double sigma1 = cfg.noise_sigma_final;
    const double decay =
        cfg.episodes > 1 ? std::pow(sigma1 / sigma0, 1.0 / double(cfg.episodes - 1)) : 1.0;

    std::vector<EpisodeLog> logs;
    logs.reserve(std::size_t(cfg.episodes));
    std::int64_t global_step = 0;

    for (int ep = 0; ep < cfg.episodes; ++ep) {
        const auto t0 = std::chrono::steady_clock::now();
        Snapshot snap;
        snap.time_slot = ep;
        snap.user_xy = sample_users(setup.dist, std::size_t(setup.num_users), setup.area, world_rng);
        if (setup.center_start) {
            for (int p = 0; p < setup.num_uavs; ++p)
                snap.uav_xy.push_back({setup.area.width_m * double(p + 1) / double(setup.num_uavs + 1),
                                       setup.area.height_m / 2.0});
        } else {
            std::uniform_real_distribution<double> ux(0.0, setup.area.width_m);
            std::uniform_real_distribution<double> uy(0.0, setup.area.height_m);
            for (int p = 0; p < setup.num_uavs; ++p)
                snap.uav_xy.push_back({ux(world_rng), uy(world_rng)});
        }

        const bool pretrain = ep < cfg.pretrain_episodes;
        // the two phases reward different objectives; stale pretrain
        // transitions would corrupt the main-phase TD targets
        if (ep == cfg.pretrain_episodes && cfg.pretrain_episodes > 0)
            buffer = ReplayBuffer(cfg.buffer_capacity);
        EnvState s = env.reset(snap);
        agent.observe_state(s);
        agent.set_noise_sigma(sigma0 * std::pow(decay, double(ep)));

        EpisodeLog log;
        log.episode = ep;
        double best_tp =
            pretrain ? env.current_throughput_no_interference() : env.current_throughput();
        double final_tp = best_tp;
        bool aborted = false;

        // trajectory ring for n-step return assembly; traj_states[t] is the
        // state before step t, acts/rews are indexed by step
        std::vector<EnvState> traj_states{s};
        std::vector<EnvAction> traj_acts;
        std::vector<double> traj_rews;
        const int n = cfg.nstep;
        const auto push_nstep = [&](std::size_t t, int horizon) {
            double acc = 0.0, g = 1.0;
            for (int j = 0; j < horizon; ++j) {
                acc += g * traj_rews[t + std::size_t(j)];
                g *= cfg.gamma;
            }
            buffer.push({traj_states[t], traj_acts[t], acc,
                         traj_states[t + std::size_t(horizon)], g});
        };

        for (int i = 0; i < cfg.epochs && !aborted; ++i) {
            const EnvAction a = agent.act(s, true);
            const StepResult res = pretrain ? env.step_pretrain(a) : env.step(a);
            agent.observe_state(res.next_state);
            traj_acts.push_back(a);
            traj_rews.push_back(res.reward);
            traj_states.push_back(res.next_state);
            if (int(traj_rews.size()) >= n) push_nstep(traj_rews.size() - std::size_t(n), n);
            if (buffer.size() >= std::size_t(cfg.batch_size)) {
                for (int u = 0; u < cfg.updates_per_step && !aborted; ++u) {
                    auto batch = buffer.sample(std::size_t(cfg.batch_size), sample_rng);
                    std::vector<Transition> relabeled;
                    if (cfg.symmetry_augment) {
                        relabeled.reserve(batch.size());
                        for (const Transition* tr : batch)
                            relabeled.push_back(permute_transition(
                                *tr, std::size_t(setup.num_users), std::size_t(setup.num_uavs),
                                sample_rng));
                        for (std::size_t j = 0; j < batch.size(); ++j) batch[j] = &relabeled[j];
                    }
                    const auto targets = agent.td_target(batch);
                    try {
                        agent.train_critic(batch, targets);
                        agent.train_actor(batch);
                    } catch (const std::runtime_error& e) {
                        std::cerr << "episode " << ep << " aborted: " << e.what() << "\n";
                        aborted = true;
                    }
                }
            }
            ++global_step;
            if (cfg.tau > 0.0) {
                agent.soft_sync_targets(cfg.tau);
            } else if (global_step % cfg.sync_period == 0) {
                agent.sync_targets();
            }
            s = res.next_state;
            log.cumulative_reward += res.reward;
            final_tp = res.throughput_now;
            best_tp = std::max(best_tp, res.throughput_now);
        }
        // flush the tail with shortened horizons (no terminal state; the last
        // visited state still bootstraps)
        for (std::size_t t = traj_rews.size() >= std::size_t(n) ? traj_rews.size() - std::size_t(n) + 1 : 0;
             t < traj_rews.size(); ++t)
            push_nstep(t, int(traj_rews.size() - t));
        log.final_throughput = final_tp;
        log.best_throughput = best_tp;
        if (setup.record_wall_clock) {
            log.wall_ms = std::chrono::duration<double, std::milli>(
                              std::chrono::steady_clock::now() - t0)
                              .count();
        }
        logs.push_back(log);
        if (on_episode) on_episode(log);
    }
    return logs;
}

std::pair<std::vector<Vec2>, double> decide(const Snapshot& snap, DdpgAgent& agent,
                                            PlacementEnv& env, int epochs) {
    EnvState s = env.reset(snap);
    EpisodeTrace trace;
    trace.entries.push_back(
        {s, EnvAction(env.action_dim(), 0.0), 0.0, env.current_throughput()});
    for (int i = 0; i < epochs; ++i) {
        const EnvAction a = agent.act(s, false);
        const StepResult res = env.step(a);
        trace.entries.push_back({res.next_state, a, res.reward, res.throughput_now});
        s = res.next_state;
    }
    const auto [state, tp] = best_state(trace);
    return {env.decode_uav_positions(state), tp};
}

}  // namespace uavsim
