#include "uavsim/neuralnet.hpp"

#include <cmath>
#include <cstring>
#include <istream>
#include <ostream>

namespace uavsim {

namespace {

double activate(double x, Activation a) {
    switch (a) {
        case Activation::Relu: return x > 0.0 ? x : 0.0;
        case Activation::Tanh: return std::tanh(x);
        case Activation::Linear: return x;
    }
    return x;
}

// derivative expressed through pre-activation (relu) or post-activation (tanh)
double activate_grad(double pre, double post, Activation a) {
    switch (a) {
        case Activation::Relu: return pre > 0.0 ? 1.0 : 0.0;
        case Activation::Tanh: return 1.0 - post * post;
        case Activation::Linear: return 1.0;
    }
    return 1.0;
}

bool all_finite(const std::vector<double>& v) {
    for (double x : v)
        if (!std::isfinite(x)) return false;
    return true;
}

void write_raw(std::ostream& os, const void* p, std::size_t n) {
    os.write(static_cast<const char*>(p), static_cast<std::streamsize>(n));
}

void read_raw(std::istream& is, void* p, std::size_t n) {
    is.read(static_cast<char*>(p), static_cast<std::streamsize>(n));
    if (!is) throw std::runtime_error("checkpoint: truncated stream");
}

void write_i64(std::ostream& os, std::int64_t v) { write_raw(os, &v, sizeof v); }

std::int64_t read_i64(std::istream& is) {
    std::int64_t v;
    read_raw(is, &v, sizeof v);
    return v;
}

void write_f64_vec(std::ostream& os, const std::vector<double>& v) {
    write_i64(os, static_cast<std::int64_t>(v.size()));
    write_raw(os, v.data(), v.size() * sizeof(double));
}

std::vector<double> read_f64_vec(std::istream& is) {
    const std::int64_t n = read_i64(is);
    if (n < 0) throw std::runtime_error("checkpoint: negative vector length");
    std::vector<double> v(static_cast<std::size_t>(n));
    read_raw(is, v.data(), v.size() * sizeof(double));
    return v;
}

}  // namespace

MlpWeights init_weights(const MlpSpec& spec, std::mt19937_64& rng, double final_layer_scale) {
    spec.validate();
    MlpWeights w;
    const std::size_t layers = spec.num_weight_layers();
    w.w.resize(layers);
    w.b.resize(layers);
    for (std::size_t l = 0; l < layers; ++l) {
        const int fan_in = spec.layer_sizes[l];
        const int fan_out = spec.layer_sizes[l + 1];
        const double bound = 1.0 / std::sqrt(double(fan_in));
        const double scale = (l + 1 == layers) ? final_layer_scale : 1.0;
        std::uniform_real_distribution<double> u(-bound, bound);
        w.w[l].resize(std::size_t(fan_out) * std::size_t(fan_in));
        w.b[l].assign(std::size_t(fan_out), 0.0);
        for (double& x : w.w[l]) x = u(rng) * scale;
    }
    return w;
}

std::vector<double> forward(const MlpWeights& w, const MlpSpec& spec,
                            std::span<const double> input, ForwardCache* cache) {
    if (input.size() != std::size_t(spec.layer_sizes.front()))
        throw std::invalid_argument("forward: input length mismatch");
    const std::size_t layers = spec.num_weight_layers();
    std::vector<double> x(input.begin(), input.end());
    if (cache) {
        cache->pre.assign(layers, {});
        cache->post.assign(layers + 1, {});
        cache->post[0] = x;
    }
    for (std::size_t l = 0; l < layers; ++l) {
        const int n_in = spec.layer_sizes[l];
        const int n_out = spec.layer_sizes[l + 1];
        const Activation act =
            (l + 1 == layers) ? spec.output_activation : spec.hidden_activation;
        std::vector<double> pre(static_cast<std::size_t>(n_out));
        const double* W = w.w[l].data();
        for (int o = 0; o < n_out; ++o) {
            double acc = w.b[l][std::size_t(o)];
            const double* row = W + std::size_t(o) * std::size_t(n_in);
            for (int i = 0; i < n_in; ++i) acc += row[i] * x[std::size_t(i)];
            pre[std::size_t(o)] = acc;
        }
        std::vector<double> post(static_cast<std::size_t>(n_out));
        for (int o = 0; o < n_out; ++o) post[std::size_t(o)] = activate(pre[std::size_t(o)], act);
        if (cache) {
            cache->pre[l] = pre;
            cache->post[l + 1] = post;
        }
        x = std::move(post);
    }
    return x;
}

Gradients backward(const MlpWeights& w, const MlpSpec& spec, const ForwardCache& cache,
                   std::span<const double> output_grad) {
    const std::size_t layers = spec.num_weight_layers();
    if (cache.pre.size() != layers || cache.post.size() != layers + 1)
        throw std::invalid_argument("backward: cache does not match the spec");
    if (output_grad.size() != std::size_t(spec.layer_sizes.back()))
        throw std::invalid_argument("backward: output_grad length mismatch");

    Gradients g;
    g.dw.resize(layers);
    g.db.resize(layers);
    std::vector<double> dpost(output_grad.begin(), output_grad.end());
    for (std::size_t li = layers; li-- > 0;) {
        const int n_in = spec.layer_sizes[li];
        const int n_out = spec.layer_sizes[li + 1];
        const Activation act =
            (li + 1 == layers) ? spec.output_activation : spec.hidden_activation;
        if (cache.pre[li].size() != std::size_t(n_out) ||
            cache.post[li].size() != std::size_t(n_in))
            throw std::invalid_argument("backward: stale cache");

        std::vector<double> dpre(static_cast<std::size_t>(n_out));
        for (int o = 0; o < n_out; ++o)
            dpre[std::size_t(o)] = dpost[std::size_t(o)] *
                activate_grad(cache.pre[li][std::size_t(o)], cache.post[li + 1][std::size_t(o)], act);

        g.dw[li].resize(std::size_t(n_out) * std::size_t(n_in));
        g.db[li] = dpre;
        const std::vector<double>& x = cache.post[li];
        for (int o = 0; o < n_out; ++o) {
            double* row = g.dw[li].data() + std::size_t(o) * std::size_t(n_in);
            const double d = dpre[std::size_t(o)];
            for (int i = 0; i < n_in; ++i) row[i] = d * x[std::size_t(i)];
        }
        std::vector<double> dx(std::size_t(n_in), 0.0);
        const double* W = w.w[li].data();
        for (int o = 0; o < n_out; ++o) {
            const double d = dpre[std::size_t(o)];
            const double* row = W + std::size_t(o) * std::size_t(n_in);
            for (int i = 0; i < n_in; ++i) dx[std::size_t(i)] += d * row[i];
        }
        dpost = std::move(dx);
    }
    g.input_grad = std::move(dpost);
    return g;
}

AdamState make_adam_state(const MlpWeights& w, double learning_rate) {
    AdamState st;
    st.learning_rate = learning_rate;
    st.m_w.resize(w.w.size());
    st.v_w.resize(w.w.size());
    st.m_b.resize(w.b.size());
    st.v_b.resize(w.b.size());
    for (std::size_t l = 0; l < w.w.size(); ++l) {
        st.m_w[l].assign(w.w[l].size(), 0.0);
        st.v_w[l].assign(w.w[l].size(), 0.0);
        st.m_b[l].assign(w.b[l].size(), 0.0);
        st.v_b[l].assign(w.b[l].size(), 0.0);
    }
    return st;
}

void adam_step(MlpWeights& w, const Gradients& grads, AdamState& st) {
    for (std::size_t l = 0; l < w.w.size(); ++l)
        if (!all_finite(grads.dw[l]) || !all_finite(grads.db[l]))
            throw std::runtime_error("adam_step: non-finite gradient, update rejected");

    st.step += 1;
    const double bc1 = 1.0 - std::pow(st.beta1, double(st.step));
    const double bc2 = 1.0 - std::pow(st.beta2, double(st.step));
    auto update = [&](std::vector<double>& param, const std::vector<double>& g,
                      std::vector<double>& m, std::vector<double>& v) {
        for (std::size_t i = 0; i < param.size(); ++i) {
            m[i] = st.beta1 * m[i] + (1.0 - st.beta1) * g[i];
            v[i] = st.beta2 * v[i] + (1.0 - st.beta2) * g[i] * g[i];
            const double mhat = m[i] / bc1;
            const double vhat = v[i] / bc2;
            param[i] -= st.learning_rate * mhat / (std::sqrt(vhat) + st.epsilon);
        }
    };
    for (std::size_t l = 0; l < w.w.size(); ++l) {
        update(w.w[l], grads.dw[l], st.m_w[l], st.v_w[l]);
        update(w.b[l], grads.db[l], st.m_b[l], st.v_b[l]);
    }
}

void hard_sync(MlpWeights& target, const MlpWeights& online) {
    target.w = online.w;
    target.b = online.b;
}

void Normalizer::update(std::span<const double> x) {
    if (mean.empty()) {
        mean.assign(x.size(), 0.0);
        m2.assign(x.size(), 0.0);
    }
    if (x.size() != mean.size()) throw std::invalid_argument("Normalizer: dimension mismatch");
    count += 1;
    for (std::size_t i = 0; i < x.size(); ++i) {
        const double delta = x[i] - mean[i];
        mean[i] += delta / double(count);
        m2[i] += delta * (x[i] - mean[i]);
    }
}

std::vector<double> Normalizer::normalize(std::span<const double> x) const {
    if (count < 2 || mean.size() != x.size()) return {x.begin(), x.end()};
    std::vector<double> out(x.size());
    for (std::size_t i = 0; i < x.size(); ++i)
        out[i] = (x[i] - mean[i]) / std::sqrt(variance(i) + 1e-8);
    return out;
}

void write_mlp(std::ostream& os, const MlpSpec& spec, const MlpWeights& w) {
    write_i64(os, static_cast<std::int64_t>(spec.layer_sizes.size()));
    for (int s : spec.layer_sizes) write_i64(os, s);
    write_i64(os, static_cast<std::int64_t>(spec.hidden_activation));
    write_i64(os, static_cast<std::int64_t>(spec.output_activation));
    for (std::size_t l = 0; l < w.w.size(); ++l) {
        write_f64_vec(os, w.w[l]);
        write_f64_vec(os, w.b[l]);
    }
}

void read_mlp(std::istream& is, MlpSpec& spec, MlpWeights& w) {
    const std::int64_t n = read_i64(is);
    if (n < 2 || n > 64) throw std::runtime_error("checkpoint: bad layer count");
    spec.layer_sizes.resize(std::size_t(n));
    for (auto& s : spec.layer_sizes) s = static_cast<int>(read_i64(is));
    spec.hidden_activation = static_cast<Activation>(read_i64(is));
    spec.output_activation = static_cast<Activation>(read_i64(is));
    spec.validate();
    w.w.resize(spec.num_weight_layers());
    w.b.resize(spec.num_weight_layers());
    for (std::size_t l = 0; l < w.w.size(); ++l) {
        w.w[l] = read_f64_vec(is);
        w.b[l] = read_f64_vec(is);
        const std::size_t expect_w =
            std::size_t(spec.layer_sizes[l]) * std::size_t(spec.layer_sizes[l + 1]);
        if (w.w[l].size() != expect_w || w.b[l].size() != std::size_t(spec.layer_sizes[l + 1]))
            throw std::runtime_error("checkpoint: weight shape mismatch");
    }
}

void write_adam(std::ostream& os, const AdamState& st) {
    write_i64(os, st.step);
    write_raw(os, &st.beta1, sizeof st.beta1);
    write_raw(os, &st.beta2, sizeof st.beta2);
    write_raw(os, &st.epsilon, sizeof st.epsilon);
    write_raw(os, &st.learning_rate, sizeof st.learning_rate);
    write_i64(os, static_cast<std::int64_t>(st.m_w.size()));
    for (std::size_t l = 0; l < st.m_w.size(); ++l) {
        write_f64_vec(os, st.m_w[l]);
        write_f64_vec(os, st.v_w[l]);
        write_f64_vec(os, st.m_b[l]);
        write_f64_vec(os, st.v_b[l]);
    }
}

void read_adam(std::istream& is, AdamState& st) {
    st.step = read_i64(is);
    read_raw(is, &st.beta1, sizeof st.beta1);
    read_raw(is, &st.beta2, sizeof st.beta2);
    read_raw(is, &st.epsilon, sizeof st.epsilon);
    read_raw(is, &st.learning_rate, sizeof st.learning_rate);
    const std::int64_t n = read_i64(is);
    if (n < 0 || n > 64) throw std::runtime_error("checkpoint: bad adam layer count");
    st.m_w.resize(std::size_t(n));
    st.v_w.resize(std::size_t(n));
    st.m_b.resize(std::size_t(n));
    st.v_b.resize(std::size_t(n));
    for (std::size_t l = 0; l < std::size_t(n); ++l) {
        st.m_w[l] = read_f64_vec(is);
        st.v_w[l] = read_f64_vec(is);
        st.m_b[l] = read_f64_vec(is);
        st.v_b[l] = read_f64_vec(is);
    }
}

void write_normalizer(std::ostream& os, const Normalizer& n) {
    write_i64(os, n.count);
    write_f64_vec(os, n.mean);
    write_f64_vec(os, n.m2);
}

void read_normalizer(std::istream& is, Normalizer& n) {
    n.count = read_i64(is);
    n.mean = read_f64_vec(is);
    n.m2 = read_f64_vec(is);
}

}  // namespace uavsim
