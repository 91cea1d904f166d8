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

#include <cmath>
#include <string>

#include "qdressed/error.hpp"
#include "qdressed/linear.hpp"

namespace qdressed {

LinearLayer LinearLayer::init(std::size_t in_dim, std::size_t out_dim, bool with_bias, Rng &rng) {
    if (in_dim == 0 || out_dim == 0) {
        throw ShapeError("linear layer dimensions must be positive");
    }
    const double bound = 1.0 / std::sqrt(static_cast<double>(in_dim));
    LinearLayer layer{Matrix(out_dim, in_dim), std::nullopt};
    for (auto &w : layer.weights.values()) {
        w = rng.uniform(-bound, bound);
    }
    if (with_bias) {
        std::vector<double> b(out_dim);
        for (auto &v : b) {
            v = rng.uniform(-bound, bound);
        }
        layer.bias = std::move(b);
    }
    return layer;
}

void LinearLayer::validate() const {
    if (bias && bias->size() != out_dim()) {
        throw ShapeError("bias length " + std::to_string(bias->size()) +
                         " does not match out_dim " + std::to_string(out_dim()));
    }
    for (const double w : weights.values()) {
        if (!std::isfinite(w)) {
            throw ArgumentError("linear layer has a non-finite weight");
        }
    }
    if (bias) {
        for (const double b : *bias) {
            if (!std::isfinite(b)) {
                throw ArgumentError("linear layer has a non-finite bias");
            }
        }
    }
}

std::vector<double> linear_forward(const LinearLayer &layer, std::span<const double> x) {
    auto y = matvec(layer.weights, x);
    if (layer.bias) {
        for (std::size_t i = 0; i < y.size(); ++i) {
            y[i] += (*layer.bias)[i];
        }
    }
    return y;
}

LinearGrads linear_backward(const LinearLayer &layer, std::span<const double> x,
                            std::span<const double> upstream) {
    if (x.size() != layer.in_dim() || upstream.size() != layer.out_dim()) {
        throw ShapeError("linear_backward: layer is " + std::to_string(layer.out_dim()) + "x" +
                         std::to_string(layer.in_dim()) + ", got input " +
                         std::to_string(x.size()) + " and upstream " +
                         std::to_string(upstream.size()));
    }
    LinearGrads g;
    g.weights = outer(upstream, x);
    if (layer.bias) {
        g.bias.assign(upstream.begin(), upstream.end());
    }
    g.input = matvec_transposed(layer.weights, upstream);
    return g;
}

} // namespace qdressed
