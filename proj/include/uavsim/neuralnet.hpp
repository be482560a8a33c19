#ifndef UAVSIM_NEURALNET_HPP
#define UAVSIM_NEURALNET_HPP

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <random>
#include <span>
#include <stdexcept>
#include <vector>

namespace uavsim {

enum class Activation { Relu, Tanh, Linear };

struct MlpSpec {
    std::vector<int> layer_sizes;  // input, hidden..., output
    Activation hidden_activation{Activation::Relu};
    Activation output_activation{Activation::Linear};

    std::size_t num_weight_layers() const { return layer_sizes.size() - 1; }

    void validate() const {
        if (layer_sizes.size() < 2) throw std::invalid_argument("MlpSpec needs >= 2 layers");
        for (int s : layer_sizes)
            if (s < 1) throw std::invalid_argument("MlpSpec layer sizes must be >= 1");
    }
};

/// Dense weights: w[l] is (out x in) row-major, b[l] has out entries.
struct MlpWeights {
    std::vector<std::vector<double>> w;
    std::vector<std::vector<double>> b;
};

/// Uniform fan-in init (+-1/sqrt(fan_in)); the last layer is scaled by
/// final_layer_scale so a tanh head can start near zero.
MlpWeights init_weights(const MlpSpec& spec, std::mt19937_64& rng,
                        double final_layer_scale = 1.0);

struct ForwardCache {
    std::vector<std::vector<double>> pre;   // pre-activation per weight layer
    std::vector<std::vector<double>> post;  // post[0] = input, post[l+1] = activation of layer l
};

std::vector<double> forward(const MlpWeights& w, const MlpSpec& spec,
                            std::span<const double> input, ForwardCache* cache = nullptr);

struct Gradients {
    std::vector<std::vector<double>> dw;
    std::vector<std::vector<double>> db;
    std::vector<double> input_grad;
};

/// Backpropagates output_grad through the cached forward pass. Also produces
/// the gradient with respect to the network input (needed to chain the critic
/// into the actor update).
Gradients backward(const MlpWeights& w, const MlpSpec& spec, const ForwardCache& cache,
                   std::span<const double> output_grad);

struct AdamState {
    std::vector<std::vector<double>> m_w, v_w, m_b, v_b;
    std::int64_t step{0};
    double beta1{0.9};
    double beta2{0.999};
    double epsilon{1e-8};
    double learning_rate{1e-4};
};

AdamState make_adam_state(const MlpWeights& w, double learning_rate);

/// One Adam update with bias correction. Throws std::runtime_error on a
/// non-finite gradient; the weights are left untouched in that case.
void adam_step(MlpWeights& w, const Gradients& grads, AdamState& st);

/// Hard copy of the online weights into the target.
void hard_sync(MlpWeights& target, const MlpWeights& online);

/// Running per-feature mean/variance (Welford); substitutes for batch norm on
/// the state inputs.
struct Normalizer {
    std::vector<double> mean;
    std::vector<double> m2;
    std::int64_t count{0};

    explicit Normalizer(std::size_t dim = 0) : mean(dim, 0.0), m2(dim, 0.0) {}

    void update(std::span<const double> x);
    std::vector<double> normalize(std::span<const double> x) const;
    double variance(std::size_t i) const { return count > 1 ? m2[i] / double(count) : 0.0; }
};

// Checkpoint i/o: "UAVCKPT1" magic, then actor/critic/targets, Adam states and
// the state normalizer as little-endian 64-bit payloads. Layout in README.
void write_mlp(std::ostream& os, const MlpSpec& spec, const MlpWeights& w);
void read_mlp(std::istream& is, MlpSpec& spec, MlpWeights& w);
void write_adam(std::ostream& os, const AdamState& st);
void read_adam(std::istream& is, AdamState& st);
void write_normalizer(std::ostream& os, const Normalizer& n);
void read_normalizer(std::istream& is, Normalizer& n);

}  // namespace uavsim

#endif  // UAVSIM_NEURALNET_HPP
