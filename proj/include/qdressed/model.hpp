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

/**
 * @file
 * Dressed quantum network: pre-net → angle embedding → variational circuit
 * → post-net. Gradients are computed by hand: analytic for the classical
 * layers and the tanh embedding, parameter-shift for every circuit angle.
 */

#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <variant>
#include <vector>

#include "qdressed/linear.hpp"
#include "qdressed/lora.hpp"
#include "qdressed/qlayer.hpp"

namespace qdressed {

/// A classical layer, optionally wrapped by a LoRA adapter.
using Layer = std::variant<LinearLayer, LoraAdapter>;

const LinearLayer &base_layer(const Layer &layer);
std::size_t layer_in_dim(const Layer &layer);
std::size_t layer_out_dim(const Layer &layer);

struct ModelShape {
    std::size_t feature_dim{768};
    std::size_t n_qubits{4};
    std::size_t depth{4};
    std::size_t n_classes{7};
};

struct DressedModel {
    Layer pre_net;  // feature_dim → n_qubits
    QuantumLayerConfig qconfig;
    CircuitParams qparams;
    Layer post_net; // n_qubits → n_classes

    [[nodiscard]] std::size_t feature_dim() const { return layer_in_dim(pre_net); }
    [[nodiscard]] std::size_t n_classes() const { return layer_out_dim(post_net); }
    [[nodiscard]] bool has_lora() const;
    [[nodiscard]] ModelShape shape() const;

    /// Throws ShapeError if the chain feature_dim → n_qubits → n_classes breaks.
    void validate() const;

    friend bool operator==(const DressedModel &, const DressedModel &) = default;
};

/// Seeded model: fan-in uniform linear layers with bias, circuit angles in [-0.01, 0.01].
DressedModel make_model(const ModelShape &shape, std::uint64_t seed);

/// Wraps pre_net and post_net in LoRA adapters (no-op on layers already wrapped).
void attach_lora(DressedModel &model, const LoraSettings &settings, std::uint64_t seed);

/// Puts every adapter into training or evaluation mode.
void set_training_mode(DressedModel &model, bool training);

struct DropoutMasks {
    std::vector<double> pre_net;
    std::vector<double> post_net;
};

/// Masks for one sample. Both are empty unless adapters are in training mode.
DropoutMasks draw_dropout_masks(const DressedModel &model, Rng &rng);

struct ForwardTrace {
    std::vector<double> pre_activation; // pre_net output
    std::vector<double> angles;         // embedded angles
    std::vector<double> expectations;   // ⟨Z_q⟩
    std::vector<double> logits;
};

ForwardTrace model_forward_trace(const DressedModel &model, std::span<const double> features,
                                 const DropoutMasks &masks = {}, Exec exec = Exec::parallel);

/// Raw logits; softmax is folded into the loss.
std::vector<double> model_forward(const DressedModel &model, std::span<const double> features,
                                  Exec exec = Exec::parallel);

/// Max-subtracted softmax.
std::vector<double> softmax(std::span<const double> logits);

struct LossGrad {
    double loss{0.0};
    std::vector<double> grad_logits;
};

/// −log softmax(logits)[true_class] and its gradient softmax − one_hot.
LossGrad softmax_cross_entropy(std::span<const double> logits, std::size_t true_class);

/// Gradient of one classical layer. A plain layer fills `weights` (and `bias`
/// when present); an adapted layer fills `lora_a` and `lora_b` and leaves the
/// frozen base without a gradient.
struct LayerGrads {
    Matrix weights;
    std::vector<double> bias;
    Matrix lora_a;
    Matrix lora_b;
};

struct ModelGrads {
    LayerGrads pre_net;
    Matrix qparams;
    LayerGrads post_net;
    double loss{0.0};
    std::vector<double> logits;

    /// Concatenated gradient in trainable_parameters() order.
    [[nodiscard]] std::vector<double> flatten() const;

    /// Zero gradient shaped like the trainable parameters of `model`.
    static ModelGrads zeros_like(const DressedModel &model);

    /// this += scale · other, same layout required.
    void add_scaled(const ModelGrads &other, double scale);
};

/// Loss and all trainable-parameter gradients for one sample.
ModelGrads backward(const DressedModel &model, std::span<const double> features,
                    std::size_t true_class, const DropoutMasks &masks = {},
                    Exec exec = Exec::parallel);

/// Gradient-chain entry point given an arbitrary ∂L/∂logits.
ModelGrads backward_from_logits(const DressedModel &model, std::span<const double> features,
                                const ForwardTrace &trace, std::span<const double> grad_logits,
                                const DropoutMasks &masks = {}, Exec exec = Exec::parallel);

/// Views of the trainable parameters: pre_net (W, b or A, B), circuit angles,
/// post_net (W, b or A, B). Frozen base layers are excluded when adapted.
std::vector<std::span<double>> trainable_parameters(DressedModel &model);

/// FNV-1a 64 over the bytes of every parameter, trainable or frozen.
std::uint64_t parameter_checksum(const DressedModel &model);

} // namespace qdressed
