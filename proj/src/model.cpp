// Copyright 2026 The qdressed Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include <algorithm>
#include <cmath>
#include <cstring>
#include <string>
#include <utility>

#include "qdressed/error.hpp"
#include "qdressed/model.hpp"

namespace qdressed {

namespace {

std::vector<double> layer_forward(const Layer &layer, std::span<const double> x,
                                  std::span<const double> mask) {
    if (const auto *adapter = std::get_if<LoraAdapter>(&layer)) {
        return lora_forward(*adapter, x, mask);
    }
    return linear_forward(std::get<LinearLayer>(layer), x);
}

/// Fills `out` and returns ∂L/∂x.
std::vector<double> layer_backward(const Layer &layer, std::span<const double> x,
                                   std::span<const double> upstream,
                                   std::span<const double> mask, LayerGrads &out) {
    if (const auto *adapter = std::get_if<LoraAdapter>(&layer)) {
        auto g = lora_backward(*adapter, x, upstream, mask);
        out.lora_a = std::move(g.a);
        out.lora_b = std::move(g.b);
        return std::move(g.input);
    }
    auto g = linear_backward(std::get<LinearLayer>(layer), x, upstream);
    out.weights = std::move(g.weights);
    out.bias = std::move(g.bias);
    return std::move(g.input);
}

LayerGrads zero_layer_grads(const Layer &layer) {
    LayerGrads g;
    if (const auto *adapter = std::get_if<LoraAdapter>(&layer)) {
        g.lora_a = Matrix(adapter->a.rows(), adapter->a.cols());
        g.lora_b = Matrix(adapter->b.rows(), adapter->b.cols());
    } else {
        const auto &lin = std::get<LinearLayer>(layer);
        g.weights = Matrix(lin.weights.rows(), lin.weights.cols());
        if (lin.bias) {
            g.bias.assign(lin.bias->size(), 0.0);
        }
    }
    return g;
}

void append_layer_params(Layer &layer, std::vector<std::span<double>> &out) {
    if (auto *adapter = std::get_if<LoraAdapter>(&layer)) {
        out.push_back(adapter->a.values());
        out.push_back(adapter->b.values());
        return;
    }
    auto &lin = std::get<LinearLayer>(layer);
    out.push_back(lin.weights.values());
    if (lin.bias) {
        out.emplace_back(*lin.bias);
    }
}

void append_layer_grads(const LayerGrads &g, std::vector<double> &out) {
    // same order as append_layer_params: W, b for plain layers, A, B for adapters
    out.insert(out.end(), g.weights.values().begin(), g.weights.values().end());
    out.insert(out.end(), g.bias.begin(), g.bias.end());
    out.insert(out.end(), g.lora_a.values().begin(), g.lora_a.values().end());
    out.insert(out.end(), g.lora_b.values().begin(), g.lora_b.values().end());
}

void axpy(std::span<double> y, std::span<const double> x, double scale) {
    if (x.size() != y.size()) {
        throw ShapeError("gradient layouts differ");
    }
    for (std::size_t i = 0; i < y.size(); ++i) {
        y[i] += scale * x[i];
    }
}

void add_layer_scaled(LayerGrads &y, const LayerGrads &x, double scale) {
    axpy(y.weights.values(), x.weights.values(), scale);
    axpy(y.bias, x.bias, scale);
    axpy(y.lora_a.values(), x.lora_a.values(), scale);
    axpy(y.lora_b.values(), x.lora_b.values(), scale);
}

constexpr std::uint64_t kFnvOffset = 0xcbf29ce484222325ULL;
constexpr std::uint64_t kFnvPrime = 0x100000001b3ULL;

void fnv_doubles(std::uint64_t &h, std::span<const double> values) {
    for (const double v : values) {
        unsigned char bytes[sizeof(double)];
        std::memcpy(bytes, &v, sizeof(double));
        for (const unsigned char b : bytes) {
            h = (h ^ b) * kFnvPrime;
        }
    }
}

void fnv_layer(std::uint64_t &h, const Layer &layer) {
    const auto &base = base_layer(layer);
    fnv_doubles(h, base.weights.values());
    if (base.bias) {
        fnv_doubles(h, *base.bias);
    }
    if (const auto *adapter = std::get_if<LoraAdapter>(&layer)) {
        fnv_doubles(h, adapter->a.values());
        fnv_doubles(h, adapter->b.values());
    }
}

} // namespace

const LinearLayer &base_layer(const Layer &layer) {
    if (const auto *adapter = std::get_if<LoraAdapter>(&layer)) {
        return adapter->base;
    }
    return std::get<LinearLayer>(layer);
}

std::size_t layer_in_dim(const Layer &layer) { return base_layer(layer).in_dim(); }
std::size_t layer_out_dim(const Layer &layer) { return base_layer(layer).out_dim(); }

bool DressedModel::has_lora() const {
    return std::holds_alternative<LoraAdapter>(pre_net) ||
           std::holds_alternative<LoraAdapter>(post_net);
}

ModelShape DressedModel::shape() const {
    return {feature_dim(), qconfig.n_qubits, qconfig.depth, n_classes()};
}

void DressedModel::validate() const {
    qconfig.validate();
    qparams.validate(qconfig);
    for (const Layer *layer : {&pre_net, &post_net}) {
        if (const auto *adapter = std::get_if<LoraAdapter>(layer)) {
            adapter->validate();
        } else {
            std::get<LinearLayer>(*layer).validate();
        }
    }
    if (layer_out_dim(pre_net) != qconfig.n_qubits || layer_in_dim(post_net) != qconfig.n_qubits) {
        throw ShapeError("dimension chain broken: pre_net " + std::to_string(feature_dim()) +
                         "->" + std::to_string(layer_out_dim(pre_net)) + ", circuit " +
                         std::to_string(qconfig.n_qubits) + " qubits, post_net " +
                         std::to_string(layer_in_dim(post_net)) + "->" +
                         std::to_string(n_classes()));
    }
}

DressedModel make_model(const ModelShape &shape, std::uint64_t seed) {
    const QuantumLayerConfig qconfig{shape.n_qubits, shape.depth};
    qconfig.validate();
    if (shape.n_classes < 1) {
        throw ShapeError("model needs at least one class");
    }
    Rng pre_rng(derive_seed(seed, {0x7072}));
    Rng q_rng(derive_seed(seed, {0x7170}));
    Rng post_rng(derive_seed(seed, {0x706f}));
    DressedModel model{
        LinearLayer::init(shape.feature_dim, shape.n_qubits, true, pre_rng),
        qconfig,
        CircuitParams::init(qconfig, q_rng),
        LinearLayer::init(shape.n_qubits, shape.n_classes, true, post_rng),
    };
    return model;
}

void attach_lora(DressedModel &model, const LoraSettings &settings, std::uint64_t seed) {
    Rng pre_rng(derive_seed(seed, {0x6c70}));
    Rng post_rng(derive_seed(seed, {0x6c6f}));
    if (auto *lin = std::get_if<LinearLayer>(&model.pre_net)) {
        model.pre_net = LoraAdapter::wrap(std::move(*lin), settings, pre_rng);
    }
    if (auto *lin = std::get_if<LinearLayer>(&model.post_net)) {
        model.post_net = LoraAdapter::wrap(std::move(*lin), settings, post_rng);
    }
}

void set_training_mode(DressedModel &model, bool training) {
    for (Layer *layer : {&model.pre_net, &model.post_net}) {
        if (auto *adapter = std::get_if<LoraAdapter>(layer)) {
            adapter->training_mode = training;
        }
    }
}

DropoutMasks draw_dropout_masks(const DressedModel &model, Rng &rng) {
    DropoutMasks masks;
    if (const auto *adapter = std::get_if<LoraAdapter>(&model.pre_net)) {
        masks.pre_net = draw_dropout_mask(*adapter, rng);
    }
    if (const auto *adapter = std::get_if<LoraAdapter>(&model.post_net)) {
        masks.post_net = draw_dropout_mask(*adapter, rng);
    }
    return masks;
}

ForwardTrace model_forward_trace(const DressedModel &model, std::span<const double> features,
                                 const DropoutMasks &masks, Exec exec) {
    if (features.size() != model.feature_dim()) {
        throw ShapeError("model expects " + std::to_string(model.feature_dim()) +
                         " features, got " + std::to_string(features.size()));
    }
    ForwardTrace t;
    t.pre_activation = layer_forward(model.pre_net, features, masks.pre_net);
    t.angles = embed_angles(t.pre_activation, model.qconfig.n_qubits);
    t.expectations = quantum_forward(model.qconfig, model.qparams, t.angles, exec);
    t.logits = layer_forward(model.post_net, t.expectations, masks.post_net);
    return t;
}

std::vector<double> model_forward(const DressedModel &model, std::span<const double> features,
                                  Exec exec) {
    return model_forward_trace(model, features, {}, exec).logits;
}

std::vector<double> softmax(std::span<const double> logits) {
    if (logits.empty()) {
        return {};
    }
    const double peak = *std::max_element(logits.begin(), logits.end());
    std::vector<double> p(logits.size());
    double total = 0.0;
    for (std::size_t i = 0; i < logits.size(); ++i) {
        p[i] = std::exp(logits[i] - peak);
        total += p[i];
    }
    for (auto &v : p) {
        v /= total;
    }
    return p;
}

LossGrad softmax_cross_entropy(std::span<const double> logits, std::size_t true_class) {
    if (true_class >= logits.size()) {
        throw ArgumentError("class " + std::to_string(true_class) + " out of range for " +
                            std::to_string(logits.size()) + " logits");
    }
    const double peak = *std::max_element(logits.begin(), logits.end());
    double total = 0.0;
    for (const double z : logits) {
        total += std::exp(z - peak);
    }
    const double log_norm = std::log(total);
    LossGrad out;
    // log-sum-exp form stays accurate when the true class dominates
    out.loss = std::max(0.0, log_norm - (logits[true_class] - peak));
    out.grad_logits.resize(logits.size());
    for (std::size_t i = 0; i < logits.size(); ++i) {
        out.grad_logits[i] = std::exp(logits[i] - peak - log_norm);
    }
    out.grad_logits[true_class] -= 1.0;
    return out;
}

std::vector<double> ModelGrads::flatten() const {
    std::vector<double> out;
    append_layer_grads(pre_net, out);
    out.insert(out.end(), qparams.values().begin(), qparams.values().end());
    append_layer_grads(post_net, out);
    return out;
}

ModelGrads ModelGrads::zeros_like(const DressedModel &model) {
    ModelGrads g;
    g.pre_net = zero_layer_grads(model.pre_net);
    g.qparams = Matrix(model.qparams.angles.rows(), model.qparams.angles.cols());
    g.post_net = zero_layer_grads(model.post_net);
    return g;
}

void ModelGrads::add_scaled(const ModelGrads &other, double scale) {
    add_layer_scaled(pre_net, other.pre_net, scale);
    axpy(qparams.values(), other.qparams.values(), scale);
    add_layer_scaled(post_net, other.post_net, scale);
    loss += scale * other.loss;
}

ModelGrads backward_from_logits(const DressedModel &model, std::span<const double> features,
                                const ForwardTrace &trace, std::span<const double> grad_logits,
                                const DropoutMasks &masks, Exec exec) {
    if (grad_logits.size() != model.n_classes()) {
        throw ShapeError("grad_logits has length " + std::to_string(grad_logits.size()) +
                         ", model has " + std::to_string(model.n_classes()) + " classes");
    }
    const std::size_t n = model.qconfig.n_qubits;
    ModelGrads g;
    g.logits = trace.logits;

    const auto grad_h =
        layer_backward(model.post_net, trace.expectations, grad_logits, masks.post_net, g.post_net);

    const auto jac = param_shift_grad(model.qconfig, model.qparams, trace.angles, exec);
    g.qparams = Matrix(model.qconfig.depth, n);
    for (std::size_t layer = 0; layer < model.qconfig.depth; ++layer) {
        for (std::size_t q = 0; q < n; ++q) {
            double acc = 0.0;
            for (std::size_t k = 0; k < n; ++k) {
                acc += jac.wrt_params(layer * n + q, k) * grad_h[k];
            }
            g.qparams(layer, q) = acc;
        }
    }

    const auto dtanh = embed_angles_derivative(trace.pre_activation);
    std::vector<double> grad_z(n, 0.0);
    for (std::size_t q = 0; q < n; ++q) {
        double acc = 0.0;
        for (std::size_t k = 0; k < n; ++k) {
            acc += jac.wrt_inputs(q, k) * grad_h[k];
        }
        grad_z[q] = acc * dtanh[q];
    }

    layer_backward(model.pre_net, features, grad_z, masks.pre_net, g.pre_net);
    return g;
}

ModelGrads backward(const DressedModel &model, std::span<const double> features,
                    std::size_t true_class, const DropoutMasks &masks, Exec exec) {
    const auto trace = model_forward_trace(model, features, masks, exec);
    const auto lg = softmax_cross_entropy(trace.logits, true_class);
    auto g = backward_from_logits(model, features, trace, lg.grad_logits, masks, exec);
    g.loss = lg.loss;
    return g;
}

std::vector<std::span<double>> trainable_parameters(DressedModel &model) {
    std::vector<std::span<double>> out;
    append_layer_params(model.pre_net, out);
    out.push_back(model.qparams.angles.values());
    append_layer_params(model.post_net, out);
    return out;
}

std::uint64_t parameter_checksum(const DressedModel &model) {
    std::uint64_t h = kFnvOffset;
    fnv_layer(h, model.pre_net);
    fnv_doubles(h, model.qparams.angles.values());
    fnv_layer(h, model.post_net);
    return h;
}

} // namespace qdressed
