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
#include <utility>

#include "qdressed/error.hpp"
#include "qdressed/lora.hpp"

namespace qdressed {

namespace {

void check_mask(const LoraAdapter &adapter, std::span<const double> mask) {
    const bool wants_mask = adapter.training_mode && adapter.dropout_p > 0.0;
    if (mask.empty()) {
        if (wants_mask) {
            throw UsageError("adapter is in training mode with dropout but no mask was given");
        }
        return;
    }
    if (!wants_mask) {
        throw UsageError("dropout mask given to an adapter that does not use dropout");
    }
    if (mask.size() != adapter.in_dim()) {
        throw UsageError("dropout mask has length " + std::to_string(mask.size()) +
                         ", adapter input is " + std::to_string(adapter.in_dim()));
    }
}

std::vector<double> apply_mask(std::span<const double> x, std::span<const double> mask) {
    std::vector<double> u(x.begin(), x.end());
    if (!mask.empty()) {
        for (std::size_t i = 0; i < u.size(); ++i) {
            u[i] *= mask[i];
        }
    }
    return u;
}

} // namespace

void LoraSettings::validate() const {
    if (rank < 1) {
        throw ArgumentError("LoRA rank must be positive");
    }
    if (!(alpha > 0.0) || !std::isfinite(alpha)) {
        throw ArgumentError("LoRA alpha must be a positive finite number");
    }
    if (!(dropout >= 0.0 && dropout < 1.0)) {
        throw ArgumentError("LoRA dropout must be in [0, 1)");
    }
}

LoraAdapter LoraAdapter::wrap(LinearLayer base, const LoraSettings &settings, Rng &rng) {
    settings.validate();
    base.validate();
    LoraAdapter adapter;
    adapter.a = Matrix(base.out_dim(), settings.rank);
    for (auto &v : adapter.a.values()) {
        v = rng.normal(0.0, 0.02);
    }
    adapter.b = Matrix(settings.rank, base.in_dim());
    adapter.rank = settings.rank;
    adapter.alpha = settings.alpha;
    adapter.dropout_p = settings.dropout;
    adapter.base = std::move(base);
    return adapter;
}

void LoraAdapter::validate() const {
    settings().validate();
    base.validate();
    if (a.rows() != out_dim() || a.cols() != rank || b.rows() != rank || b.cols() != in_dim()) {
        throw ShapeError("LoRA factors do not match base " + std::to_string(out_dim()) + "x" +
                         std::to_string(in_dim()) + " at rank " + std::to_string(rank));
    }
}

std::vector<double> draw_dropout_mask(const LoraAdapter &adapter, Rng &rng) {
    if (!adapter.training_mode || adapter.dropout_p <= 0.0) {
        return {};
    }
    const double keep_scale = 1.0 / (1.0 - adapter.dropout_p);
    std::vector<double> mask(adapter.in_dim());
    for (auto &m : mask) {
        m = rng.uniform01() < adapter.dropout_p ? 0.0 : keep_scale;
    }
    return mask;
}

std::vector<double> lora_forward(const LoraAdapter &adapter, std::span<const double> x,
                                 std::span<const double> mask) {
    if (x.size() != adapter.in_dim()) {
        throw ShapeError("lora_forward: expected input of length " +
                         std::to_string(adapter.in_dim()) + ", got " + std::to_string(x.size()));
    }
    check_mask(adapter, mask);
    auto y = linear_forward(adapter.base, x);
    const auto low = matvec(adapter.b, apply_mask(x, mask));
    const auto delta = matvec(adapter.a, low);
    const double s = adapter.scaling();
    for (std::size_t i = 0; i < y.size(); ++i) {
        y[i] += s * delta[i];
    }
    return y;
}

std::vector<double> lora_forward(const LoraAdapter &adapter, std::span<const double> x, Rng &rng) {
    const auto mask = draw_dropout_mask(adapter, rng);
    return lora_forward(adapter, x, mask);
}

LinearLayer merge(const LoraAdapter &adapter) {
    LinearLayer merged = adapter.base;
    const Matrix delta = matmul(adapter.a, adapter.b);
    const double s = adapter.scaling();
    auto w = merged.weights.values();
    const auto d = delta.values();
    for (std::size_t i = 0; i < w.size(); ++i) {
        w[i] += s * d[i];
    }
    return merged;
}

LoraGrads lora_backward(const LoraAdapter &adapter, std::span<const double> x,
                        std::span<const double> upstream, std::span<const double> mask) {
    if (x.size() != adapter.in_dim() || upstream.size() != adapter.out_dim()) {
        throw ShapeError("lora_backward: adapter is " + std::to_string(adapter.out_dim()) + "x" +
                         std::to_string(adapter.in_dim()) + ", got input " +
                         std::to_string(x.size()) + " and upstream " +
                         std::to_string(upstream.size()));
    }
    check_mask(adapter, mask);
    const double s = adapter.scaling();
    const auto u = apply_mask(x, mask);
    const auto v = matvec(adapter.b, u);

    LoraGrads g;
    g.a = outer(upstream, v);
    for (auto &e : g.a.values()) {
        e *= s;
    }
    auto t = matvec_transposed(adapter.a, upstream);
    for (auto &e : t) {
        e *= s;
    }
    g.b = outer(t, u);

    g.input = matvec_transposed(adapter.base.weights, upstream);
    const auto through_adapter = matvec_transposed(adapter.b, t);
    for (std::size_t i = 0; i < g.input.size(); ++i) {
        g.input[i] += mask.empty() ? through_adapter[i] : mask[i] * through_adapter[i];
    }
    return g;
}

} // namespace qdressed
