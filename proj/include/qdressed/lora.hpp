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
 * Low-rank adapter around a frozen linear layer.
 *
 *     y = W·x + b + (alpha / rank) · A·(B·dropout(x))
 *
 * A is out_dim × rank, B is rank × in_dim. Dropout acts on the adapter
 * path only and uses inverted scaling: survivors are multiplied by 1/(1-p).
 * W and b are never touched by any function in this header.
 */

#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "qdressed/linear.hpp"
#include "qdressed/matrix.hpp"
#include "qdressed/rng.hpp"

namespace qdressed {

struct LoraSettings {
    std::size_t rank{8};
    double alpha{16.0};
    double dropout{0.6};

    void validate() const;

    friend bool operator==(const LoraSettings &, const LoraSettings &) = default;
};

struct LoraAdapter {
    LinearLayer base;
    Matrix a; // out_dim × rank, seeded N(0, 0.02²)
    Matrix b; // rank × in_dim, zero at init
    std::size_t rank{8};
    double alpha{16.0};
    double dropout_p{0.6};
    bool training_mode{false};

    /// Wraps `base`; A is Gaussian with std 0.02 and B starts at zero, so the
    /// adapted layer initially reproduces `base` exactly.
    static LoraAdapter wrap(LinearLayer base, const LoraSettings &settings, Rng &rng);

    [[nodiscard]] double scaling() const noexcept { return alpha / static_cast<double>(rank); }
    [[nodiscard]] std::size_t in_dim() const noexcept { return base.in_dim(); }
    [[nodiscard]] std::size_t out_dim() const noexcept { return base.out_dim(); }
    [[nodiscard]] LoraSettings settings() const { return {rank, alpha, dropout_p}; }

    void validate() const;

    friend bool operator==(const LoraAdapter &, const LoraAdapter &) = default;
};

/// Per-coordinate dropout factors (0 or 1/(1-p)) for one forward pass.
/// Empty when the adapter is in evaluation mode or p == 0.
std::vector<double> draw_dropout_mask(const LoraAdapter &adapter, Rng &rng);

/// Forward pass with an explicit mask (empty = no dropout).
/// Throws UsageError when the mask does not fit the adapter's mode or width.
std::vector<double> lora_forward(const LoraAdapter &adapter, std::span<const double> x,
                                 std::span<const double> mask);

/// Forward pass drawing a fresh mask from `rng` when in training mode.
std::vector<double> lora_forward(const LoraAdapter &adapter, std::span<const double> x, Rng &rng);

/// Plain layer with W' = W + (alpha/rank)·A·B and the base bias.
LinearLayer merge(const LoraAdapter &adapter);

struct LoraGrads {
    Matrix a;
    Matrix b;
    std::vector<double> input; // ∂L/∂x, through both base and adapter paths
};

/// Gradients for A and B given ∂L/∂y. `mask` must be the one used in the
/// paired forward pass. The base layer receives no gradient.
LoraGrads lora_backward(const LoraAdapter &adapter, std::span<const double> x,
                        std::span<const double> upstream, std::span<const double> mask);

} // namespace qdressed
