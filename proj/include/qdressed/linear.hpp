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

#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <vector>

#include "qdressed/matrix.hpp"
#include "qdressed/rng.hpp"

namespace qdressed {

/// Affine map y = W·x + b. The bias is optional.
struct LinearLayer {
    Matrix weights; // out_dim × in_dim
    std::optional<std::vector<double>> bias;

    [[nodiscard]] std::size_t in_dim() const noexcept { return weights.cols(); }
    [[nodiscard]] std::size_t out_dim() const noexcept { return weights.rows(); }

    /// Fan-in uniform init: weights and bias drawn from U(-1/√in, 1/√in).
    static LinearLayer init(std::size_t in_dim, std::size_t out_dim, bool with_bias, Rng &rng);

    /// Throws ShapeError on a bias/weight mismatch, ArgumentError on non-finite entries.
    void validate() const;

    friend bool operator==(const LinearLayer &, const LinearLayer &) = default;
};

std::vector<double> linear_forward(const LinearLayer &layer, std::span<const double> x);

struct LinearGrads {
    Matrix weights;
    std::vector<double> bias; // empty when the layer has no bias
    std::vector<double> input;
};

/// Gradients of a scalar loss given ∂L/∂y = `upstream`.
LinearGrads linear_backward(const LinearLayer &layer, std::span<const double> x,
                            std::span<const double> upstream);

} // namespace qdressed
