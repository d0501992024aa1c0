// SPDX-License-Identifier: Apache-2.0
#include "uavris/mlp.hpp"

#include <cmath>
#include <cstring>
#include <fstream>
#include <stdexcept>

namespace uavris {

namespace {

void check_spec(const MlpSpec& spec) {
    if (spec.input_dim < 1 || spec.output_dim < 1)
        throw std::invalid_argument("mlp: dimensions must be >= 1");
    for (int h : spec.hidden)
        if (h < 1) throw std::invalid_argument("mlp: hidden widths must be >= 1");
}

void check_shapes(const MlpParams& params, const MlpSpec& spec) {
    if (static_cast<int>(params.w.size()) != spec.layer_count() ||
        static_cast<int>(params.b.size()) != spec.layer_count())
        throw std::invalid_argument("mlp: layer count mismatch");
    for (int l = 0; l < spec.layer_count(); ++l) {
        if (params.w[static_cast<size_t>(l)].rows != spec.out_dim(l) ||
            params.w[static_cast<size_t>(l)].cols != spec.in_dim(l) ||
            static_cast<int>(params.b[static_cast<size_t>(l)].size()) != spec.out_dim(l))
            throw std::invalid_argument("mlp: parameter shape mismatch");
    }
}

// Eight independent partial sums per dot product; lanes vectorize without
// reassociating the additions, keeping results deterministic.
double dot(const double* __restrict a, const double* __restrict b, int n) {
    double lanes[8] = {0, 0, 0, 0, 0, 0, 0, 0};
    int i = 0;
    for (; i + 8 <= n; i += 8)
        for (int k = 0; k < 8; ++k) lanes[k] += a[i + k] * b[i + k];
    double tail = 0.0;
    for (; i < n; ++i) tail += a[i] * b[i];
    return ((lanes[0] + lanes[1]) + (lanes[2] + lanes[3])) +
           ((lanes[4] + lanes[5]) + (lanes[6] + lanes[7])) + tail;
}

// z = x * w^T + b, one row per batch sample
void linear_forward(const Matrix& x, const Matrix& w, const std::vector<double>& b, Matrix& z) {
    z = Matrix(x.rows, w.rows);
    for (int r = 0; r < x.rows; ++r) {
        const double* xi = x.row(r);
        double* zo = z.row(r);
        for (int o = 0; o < w.rows; ++o)
            zo[o] = b[static_cast<size_t>(o)] + dot(xi, w.row(o), w.cols);
    }
}

void apply_activation(const Matrix& z, bool is_output, OutputActivation out_act, Matrix& h) {
    h = Matrix(z.rows, z.cols);
    const size_t n = z.a.size();
    if (!is_output) {
        for (size_t i = 0; i < n; ++i) h.a[i] = z.a[i] > 0.0 ? z.a[i] : 0.0;
    } else if (out_act == OutputActivation::kTanh) {
        for (size_t i = 0; i < n; ++i) h.a[i] = std::tanh(z.a[i]);
    } else {
        h.a = z.a;
    }
}

template <typename T>
void write_pod(std::ostream& out, const T& v) {
    out.write(reinterpret_cast<const char*>(&v), sizeof(T));
}

template <typename T>
T read_pod(std::istream& in) {
    T v{};
    in.read(reinterpret_cast<char*>(&v), sizeof(T));
    if (!in) throw std::runtime_error("mlp checkpoint: truncated file");
    return v;
}

constexpr char kMagic[8] = {'U', 'V', 'R', 'S', 'M', 'L', 'P', '1'};

}  // namespace

MlpParams init_params(const MlpSpec& spec, std::mt19937_64& rng, double final_layer_scale) {
    check_spec(spec);
    MlpParams params;
    for (int l = 0; l < spec.layer_count(); ++l) {
        const int in = spec.in_dim(l);
        const int out = spec.out_dim(l);
        const double bound = 1.0 / std::sqrt(static_cast<double>(in));
        const double scale = l == spec.layer_count() - 1 ? final_layer_scale : 1.0;
        std::uniform_real_distribution<double> u(-bound, bound);
        Matrix w(out, in);
        for (auto& v : w.a) v = scale * u(rng);
        std::vector<double> b(static_cast<size_t>(out));
        for (auto& v : b) v = scale * u(rng);
        params.w.push_back(std::move(w));
        params.b.push_back(std::move(b));
    }
    return params;
}

MlpGrads zero_grads(const MlpSpec& spec) {
    MlpGrads g;
    for (int l = 0; l < spec.layer_count(); ++l) {
        g.w.emplace_back(spec.out_dim(l), spec.in_dim(l));
        g.b.emplace_back(static_cast<size_t>(spec.out_dim(l)), 0.0);
    }
    return g;
}

const Matrix& forward_batch(const MlpParams& params, const MlpSpec& spec, const Matrix& x,
                            BatchCache& cache) {
    check_shapes(params, spec);
    if (x.cols != spec.input_dim) throw std::invalid_argument("mlp forward: input dim mismatch");

    const int layers = spec.layer_count();
    cache.input = x;
    cache.z.resize(static_cast<size_t>(layers));
    cache.h.resize(static_cast<size_t>(layers));

    const Matrix* cur = &cache.input;
    for (int l = 0; l < layers; ++l) {
        linear_forward(*cur, params.w[static_cast<size_t>(l)], params.b[static_cast<size_t>(l)],
                       cache.z[static_cast<size_t>(l)]);
        apply_activation(cache.z[static_cast<size_t>(l)], l == layers - 1, spec.out_act,
                         cache.h[static_cast<size_t>(l)]);
        cur = &cache.h[static_cast<size_t>(l)];
    }
    return cache.h.back();
}

void backward_batch(const MlpParams& params, const MlpSpec& spec, const BatchCache& cache,
                    const Matrix& upstream, MlpGrads& grads, Matrix* input_grad) {
    const int layers = spec.layer_count();
    if (upstream.rows != cache.input.rows || upstream.cols != spec.output_dim)
        throw std::invalid_argument("mlp backward: upstream shape mismatch");

    // delta at the output layer
    Matrix delta(upstream.rows, upstream.cols);
    if (spec.out_act == OutputActivation::kTanh) {
        const Matrix& y = cache.h.back();
        for (size_t i = 0; i < delta.a.size(); ++i)
            delta.a[i] = upstream.a[i] * (1.0 - y.a[i] * y.a[i]);
    } else {
        delta.a = upstream.a;
    }

    for (int l = layers - 1; l >= 0; --l) {
        const Matrix& input = l == 0 ? cache.input : cache.h[static_cast<size_t>(l - 1)];
        Matrix& dw = grads.w[static_cast<size_t>(l)];
        std::vector<double>& db = grads.b[static_cast<size_t>(l)];

        for (int r = 0; r < delta.rows; ++r) {
            const double* drow = delta.row(r);
            const double* xrow = input.row(r);
            for (int o = 0; o < dw.rows; ++o) {
                const double d = drow[o];
                if (d == 0.0) continue;
                db[static_cast<size_t>(o)] += d;
                double* wrow = dw.row(o);
                for (int i = 0; i < dw.cols; ++i) wrow[i] += d * xrow[i];
            }
        }

        const bool need_input_grad = l > 0 || input_grad != nullptr;
        if (!need_input_grad) break;

        const Matrix& w = params.w[static_cast<size_t>(l)];
        Matrix prev_delta(delta.rows, w.cols);
        for (int r = 0; r < delta.rows; ++r) {
            const double* drow = delta.row(r);
            double* prow = prev_delta.row(r);
            for (int o = 0; o < w.rows; ++o) {
                const double d = drow[o];
                if (d == 0.0) continue;
                const double* wrow = w.row(o);
                for (int i = 0; i < w.cols; ++i) prow[i] += d * wrow[i];
            }
        }
        if (l > 0) {
            // rectifier derivative gate
            const Matrix& z = cache.z[static_cast<size_t>(l - 1)];
            for (size_t i = 0; i < prev_delta.a.size(); ++i)
                if (z.a[i] <= 0.0) prev_delta.a[i] = 0.0;
            delta = std::move(prev_delta);
        } else if (input_grad != nullptr) {
            *input_grad = std::move(prev_delta);
        }
    }
}

std::vector<double> forward(const MlpParams& params, const MlpSpec& spec,
                            const std::vector<double>& x) {
    if (static_cast<int>(x.size()) != spec.input_dim)
        throw std::invalid_argument("mlp forward: input dim mismatch");
    Matrix xm(1, spec.input_dim);
    xm.a = x;
    BatchCache cache;
    const Matrix& y = forward_batch(params, spec, xm, cache);
    return y.a;
}

GradientResult gradient(const MlpParams& params, const MlpSpec& spec, const std::vector<double>& x,
                        const std::vector<double>& upstream) {
    if (static_cast<int>(upstream.size()) != spec.output_dim)
        throw std::invalid_argument("mlp gradient: upstream dim mismatch");
    Matrix xm(1, spec.input_dim);
    if (static_cast<int>(x.size()) != spec.input_dim)
        throw std::invalid_argument("mlp gradient: input dim mismatch");
    xm.a = x;
    BatchCache cache;
    forward_batch(params, spec, xm, cache);

    Matrix up(1, spec.output_dim);
    up.a = upstream;

    GradientResult result;
    result.grads = zero_grads(spec);
    Matrix input_grad;
    backward_batch(params, spec, cache, up, result.grads, &input_grad);
    result.input_grad = input_grad.a;
    return result;
}

AdamState make_adam(const MlpSpec& spec, double lr) {
    AdamState state;
    state.m = zero_grads(spec);
    state.v = zero_grads(spec);
    state.lr = lr;
    return state;
}

void adam_step(AdamState& state, MlpParams& params, const MlpGrads& grads) {
    ++state.step;
    const double bc1 = 1.0 - std::pow(state.beta1, static_cast<double>(state.step));
    const double bc2 = 1.0 - std::pow(state.beta2, static_cast<double>(state.step));

    auto update = [&](double& p, double& m, double& v, double g) {
        m = state.beta1 * m + (1.0 - state.beta1) * g;
        v = state.beta2 * v + (1.0 - state.beta2) * g * g;
        const double mhat = m / bc1;
        const double vhat = v / bc2;
        p -= state.lr * mhat / (std::sqrt(vhat) + state.eps);
    };

    for (size_t l = 0; l < params.w.size(); ++l) {
        for (size_t i = 0; i < params.w[l].a.size(); ++i)
            update(params.w[l].a[i], state.m.w[l].a[i], state.v.w[l].a[i], grads.w[l].a[i]);
        for (size_t i = 0; i < params.b[l].size(); ++i)
            update(params.b[l][i], state.m.b[l][i], state.v.b[l][i], grads.b[l][i]);
    }
}

void soft_update(MlpParams& target, const MlpParams& online, double rho) {
    if (!(rho >= 0.0 && rho <= 1.0)) throw std::invalid_argument("soft_update: rho out of [0, 1]");
    for (size_t l = 0; l < target.w.size(); ++l) {
        for (size_t i = 0; i < target.w[l].a.size(); ++i)
            target.w[l].a[i] = rho * online.w[l].a[i] + (1.0 - rho) * target.w[l].a[i];
        for (size_t i = 0; i < target.b[l].size(); ++i)
            target.b[l][i] = rho * online.b[l][i] + (1.0 - rho) * target.b[l][i];
    }
}

void save_mlp(const std::string& path, const MlpSpec& spec, const MlpParams& params) {
    check_shapes(params, spec);
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("mlp checkpoint: cannot open for writing: " + path);
    out.write(kMagic, sizeof(kMagic));
    write_pod<std::uint32_t>(out, static_cast<std::uint32_t>(spec.input_dim));
    write_pod<std::uint32_t>(out, static_cast<std::uint32_t>(spec.hidden.size()));
    for (int h : spec.hidden) write_pod<std::uint32_t>(out, static_cast<std::uint32_t>(h));
    write_pod<std::uint32_t>(out, static_cast<std::uint32_t>(spec.output_dim));
    write_pod<std::uint8_t>(out, static_cast<std::uint8_t>(spec.out_act));
    for (size_t l = 0; l < params.w.size(); ++l) {
        out.write(reinterpret_cast<const char*>(params.w[l].a.data()),
                  static_cast<std::streamsize>(params.w[l].a.size() * sizeof(double)));
        out.write(reinterpret_cast<const char*>(params.b[l].data()),
                  static_cast<std::streamsize>(params.b[l].size() * sizeof(double)));
    }
    if (!out) throw std::runtime_error("mlp checkpoint: write failed: " + path);
}

std::pair<MlpSpec, MlpParams> load_mlp(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("mlp checkpoint: cannot open: " + path);
    char magic[8];
    in.read(magic, sizeof(magic));
    if (!in || std::memcmp(magic, kMagic, sizeof(kMagic)) != 0)
        throw std::runtime_error("mlp checkpoint: bad magic: " + path);

    MlpSpec spec;
    spec.input_dim = static_cast<int>(read_pod<std::uint32_t>(in));
    const auto n_hidden = read_pod<std::uint32_t>(in);
    spec.hidden.resize(n_hidden);
    for (auto& h : spec.hidden) h = static_cast<int>(read_pod<std::uint32_t>(in));
    spec.output_dim = static_cast<int>(read_pod<std::uint32_t>(in));
    spec.out_act = static_cast<OutputActivation>(read_pod<std::uint8_t>(in));
    check_spec(spec);

    MlpParams params;
    for (int l = 0; l < spec.layer_count(); ++l) {
        Matrix w(spec.out_dim(l), spec.in_dim(l));
        in.read(reinterpret_cast<char*>(w.a.data()),
                static_cast<std::streamsize>(w.a.size() * sizeof(double)));
        std::vector<double> b(static_cast<size_t>(spec.out_dim(l)));
        in.read(reinterpret_cast<char*>(b.data()),
                static_cast<std::streamsize>(b.size() * sizeof(double)));
        if (!in) throw std::runtime_error("mlp checkpoint: truncated file: " + path);
        params.w.push_back(std::move(w));
        params.b.push_back(std::move(b));
    }
    return {spec, params};
}

}  // namespace uavris
