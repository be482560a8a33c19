#ifndef UAVSIM_DDPG_HPP
#define UAVSIM_DDPG_HPP

#include <cstddef>
#include <cstdint>
#include <functional>
#include <string>
#include <utility>
#include <vector>

#include "uavsim/mdp_env.hpp"
#include "uavsim/neuralnet.hpp"

namespace uavsim {

struct Transition {
    EnvState state;
    EnvAction action;
    double reward{0.0};  // n-step accumulated when the agent uses n-step returns
    EnvState next_state;
    double bootstrap_discount{-1.0};  // < 0: use the agent's gamma
};

/// Bounded FIFO; eviction is oldest-first.
class ReplayBuffer {
public:
    explicit ReplayBuffer(std::size_t capacity) : capacity_(capacity) {}

    void push(Transition t);
    std::vector<const Transition*> sample(std::size_t batch, Rng& rng) const;

    std::size_t size() const { return data_.size(); }
    std::size_t capacity() const { return capacity_; }
    const Transition& at(std::size_t i) const;  // i=0 is the oldest entry

private:
    std::size_t capacity_;
    std::size_t head_{0};  // insertion point once full
    std::vector<Transition> data_;
};

struct AgentConfig {
    double gamma{0.9};
    int batch_size{64};
    int sync_period{200};
    double tau{0.0};  // 0: hard sync every sync_period; >0: per-step Polyak blend
    int episodes{5000};
    int epochs{800};
    double noise_sigma_init{0.3};   // fraction of a_max
    double noise_sigma_final{0.02};
    double noise_theta{0.0};  // 0: white noise; >0: OU mean reversion rate
    int pretrain_episodes{0};
    int updates_per_step{1};  // gradient updates per environment step
    // randomly permute user and UAV indices of sampled transitions; the task
    // is invariant under both, so this is free data amplification
    bool symmetry_augment{false};
    int nstep{1};  // multi-step return horizon for replayed transitions
    std::size_t buffer_capacity{10'000'000};
    std::vector<int> hidden_sizes{256, 128, 64, 16};
    double learning_rate{1e-4};
    double actor_learning_rate{-1.0};  // <= 0: use learning_rate
    double actor_final_scale{0.01};
    bool normalize_states{true};

    void validate() const {
        if (gamma < 0.0 || gamma > 1.0) throw std::invalid_argument("agent.gamma must be in [0,1]");
        if (batch_size < 1) throw std::invalid_argument("agent.batch_size must be >= 1");
        if (sync_period < 1) throw std::invalid_argument("agent.sync_period must be >= 1");
        if (episodes < 1) throw std::invalid_argument("agent.episodes must be >= 1");
        if (epochs < 1) throw std::invalid_argument("agent.epochs must be >= 1");
        if (pretrain_episodes < 0)
            throw std::invalid_argument("agent.pretrain_episodes must be >= 0");
        if (updates_per_step < 1)
            throw std::invalid_argument("agent.updates_per_step must be >= 1");
        if (noise_theta < 0.0 || noise_theta > 1.0)
            throw std::invalid_argument("agent.noise_theta must be in [0,1]");
        if (tau < 0.0 || tau > 1.0) throw std::invalid_argument("agent.tau must be in [0,1]");
        if (nstep < 1) throw std::invalid_argument("agent.nstep must be >= 1");
    }
};

class DdpgAgent {
public:
    DdpgAgent(std::size_t state_dim, std::size_t action_dim, double a_max,
              const AgentConfig& cfg, std::uint64_t seed);

    EnvAction act(const EnvState& state, bool explore);

    std::vector<double> td_target(const std::vector<const Transition*>& batch) const;
    double train_critic(const std::vector<const Transition*>& batch,
                        const std::vector<double>& targets);
    double train_actor(const std::vector<const Transition*>& batch);
    void sync_targets();
    void soft_sync_targets(double tau);

    void observe_state(const EnvState& state);  // feeds the input normalizer
    // also resets the OU noise state; call at episode boundaries
    void set_noise_sigma(double sigma_frac) {
        noise_sigma_ = sigma_frac;
        ou_state_.assign(action_dim_, 0.0);
    }

    void save(const std::string& path) const;
    void load(const std::string& path);

    std::size_t state_dim() const { return state_dim_; }
    std::size_t action_dim() const { return action_dim_; }
    double a_max() const { return a_max_; }
    const AgentConfig& config() const { return cfg_; }

    const MlpWeights& actor_weights() const { return actor_; }
    MlpWeights& actor_weights() { return actor_; }
    const MlpWeights& critic_weights() const { return critic_; }
    MlpWeights& critic_weights() { return critic_; }
    const MlpSpec& actor_spec() const { return actor_spec_; }
    const MlpSpec& critic_spec() const { return critic_spec_; }

private:
    std::vector<double> preprocess(const EnvState& state) const;
    double critic_eval(const MlpWeights& critic, std::span<const double> x,
                       std::span<const double> t, ForwardCache* cache = nullptr) const;

    std::size_t state_dim_;
    std::size_t action_dim_;
    double a_max_;
    AgentConfig cfg_;

    MlpSpec actor_spec_;
    MlpSpec critic_spec_;
    MlpWeights actor_, critic_, target_actor_, target_critic_;
    AdamState actor_adam_, critic_adam_;
    Normalizer normalizer_;
    double noise_sigma_{0.0};
    std::vector<double> ou_state_;
    mutable Rng rng_;
};

struct EpisodeLog {
    int episode{0};
    double cumulative_reward{0.0};
    double final_throughput{0.0};
    double best_throughput{0.0};
    double wall_ms{0.0};
};

struct TrainSetup {
    AreaConfig area;
    ChannelParams channel;
    QoSParams qos;
    EnvConfig env;
    UserDistribution dist;
    int num_users{24};
    int num_uavs{2};
    AgentConfig agent;
    std::uint64_t seed{1};
    bool record_wall_clock{true};  // off in reproducible runs so logs are byte-stable
    // true: every episode starts from the deterministic center layout (the same
    // start decide() is evaluated from); false: uniform random starts
    bool center_start{false};
};

/// Full Algorithm-1 training loop: per episode, fresh user positions and random
/// initial UAV placement, I epochs of act/step/store/learn, hard target syncs
/// every L steps. The first pretrain_episodes episodes use the
/// interference-free reward. Returns per-episode logs; the agent holds the
/// trained weights.
std::vector<EpisodeLog> train_agent(const TrainSetup& setup, DdpgAgent& agent,
                                    const std::function<void(const EpisodeLog&)>& on_episode = {});

/// Noise-free rollout of `epochs` steps from the snapshot; returns the best
/// placement seen (the initial placement is a candidate) and its throughput.
std::pair<std::vector<Vec2>, double> decide(const Snapshot& snap, DdpgAgent& agent,
                                            PlacementEnv& env, int epochs);

}  // namespace uavsim

#endif  // UAVSIM_DDPG_HPP
