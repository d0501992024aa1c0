// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <random>
#include <string>
#include <vector>

namespace uavris {

enum class OutputActivation : std::uint8_t { kTanh = 0, kIdentity = 1 };

struct MlpSpec {
    int input_dim = 1;
    std::vector<int> hidden;  // rectifier layers
    int output_dim = 1;
    OutputActivation out_act = OutputActivation::kIdentity;

    int layer_count() const { return static_cast<int>(hidden.size()) + 1; }
    int in_dim(int layer) const { return layer == 0 ? input_dim : hidden[static_cast<size_t>(layer - 1)]; }
    int out_dim(int layer) const {
        return layer == static_cast<int>(hidden.size()) ? output_dim : hidden[static_cast<size_t>(layer)];
    }
};

// Row-major dense matrix.
struct Matrix {
    int rows = 0;
    int cols = 0;
    std::vector<double> a;

    Matrix() = default;
    Matrix(int r, int c) : rows(r), cols(c), a(static_cast<size_t>(r) * c, 0.0) {}
    double* row(int r) { return &a[static_cast<size_t>(r) * cols]; }
    const double* row(int r) const { return &a[static_cast<size_t>(r) * cols]; }
    double& operator()(int r, int c) { return a[static_cast<size_t>(r) * cols + c]; }
    double operator()(int r, int c) const { return a[static_cast<size_t>(r) * cols + c]; }
};

// Weights w[l] have shape (out_dim(l) x in_dim(l)); biases b[l] length out_dim(l).
struct MlpParams {
    std::vector<Matrix> w;
    std::vector<std::vector<double>> b;
};

// Gradients share the parameter shapes.
using MlpGrads = MlpParams;

// Uniform fan-in initialization, U(-1/sqrt(fan_in), +1/sqrt(fan_in)); the last
// layer's draw is multiplied by final_layer_scale.
MlpParams init_params(const MlpSpec& spec, std::mt19937_64& rng, double final_layer_scale = 1.0);

MlpGrads zero_grads(const MlpSpec& spec);

std::vector<double> forward(const MlpParams& params, const MlpSpec& spec,
                            const std::vector<double>& x);

// Exact gradient of <upstream, forward(x)> with respect to every parameter
// and to the input.
struct GradientResult {
    MlpGrads grads;
    std::vector<double> input_grad;
};
GradientResult gradient(const MlpParams& params, const MlpSpec& spec, const std::vector<double>& x,
                        const std::vector<double>& upstream);

// Batched pass: inputs are (batch x input_dim); cached pre-activations enable
// one backward per forward.
struct BatchCache {
    Matrix input;
    std::vector<Matrix> z;  // pre-activations per layer
    std::vector<Matrix> h;  // post-activations per layer (h.back() is the output)
};
const Matrix& forward_batch(const MlpParams& params, const MlpSpec& spec, const Matrix& x,
                            BatchCache& cache);

// Accumulates the gradient of sum_b <upstream_b, f(x_b)> into `grads`
// (pre-zeroed by the caller); optionally emits the per-sample input gradient.
void backward_batch(const MlpParams& params, const MlpSpec& spec, const BatchCache& cache,
                    const Matrix& upstream, MlpGrads& grads, Matrix* input_grad = nullptr);

struct AdamState {
    MlpParams m;
    MlpParams v;
    long step = 0;
    double lr = 1e-3;
    double beta1 = 0.9;
    double beta2 = 0.999;
    double eps = 1e-8;
};

AdamState make_adam(const MlpSpec& spec, double lr);

// Bias-corrected Adam update in place.
void adam_step(AdamState& state, MlpParams& params, const MlpGrads& grads);

// target <- rho * online + (1 - rho) * target
void soft_update(MlpParams& target, const MlpParams& online, double rho);

// Versioned binary checkpoint; round-trips bit-exactly.
void save_mlp(const std::string& path, const MlpSpec& spec, const MlpParams& params);
std::pair<MlpSpec, MlpParams> load_mlp(const std::string& path);

}  // namespace uavris
