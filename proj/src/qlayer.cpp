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
#include <cstdint>
#include <string>
#include <utility>

#include "qdressed/error.hpp"
#include "qdressed/qlayer.hpp"

namespace qdressed {

void QuantumLayerConfig::validate() const {
    if (n_qubits < 1 || n_qubits > kMaxQubits) {
        throw SizeError("n_qubits must be in [1, " + std::to_string(kMaxQubits) + "], got " +
                        std::to_string(n_qubits));
    }
    if (depth > kMaxDepth) {
        throw SizeError("depth must be in [0, " + std::to_string(kMaxDepth) + "], got " +
                        std::to_string(depth));
    }
}

CircuitParams CircuitParams::init(const QuantumLayerConfig &config, Rng &rng) {
    config.validate();
    CircuitParams p{Matrix(config.depth, config.n_qubits)};
    for (auto &v : p.angles.values()) {
        v = rng.uniform(-0.01, 0.01);
    }
    return p;
}

CircuitParams CircuitParams::zeros(const QuantumLayerConfig &config) {
    config.validate();
    return CircuitParams{Matrix(config.depth, config.n_qubits)};
}

void CircuitParams::validate(const QuantumLayerConfig &config) const {
    if (angles.rows() != config.depth || angles.cols() != config.n_qubits) {
        throw ShapeError("circuit params are " + std::to_string(angles.rows()) + "x" +
                         std::to_string(angles.cols()) + ", config expects " +
                         std::to_string(config.depth) + "x" + std::to_string(config.n_qubits));
    }
    for (const double v : angles.values()) {
        if (!std::isfinite(v)) {
            throw ArgumentError("circuit params contain a non-finite angle");
        }
    }
}

std::vector<double> embed_angles(std::span<const double> features, std::size_t n_qubits) {
    if (features.size() != n_qubits) {
        throw ShapeError("embed_angles: expected " + std::to_string(n_qubits) +
                         " features, got " + std::to_string(features.size()));
    }
    std::vector<double> out(features.size());
    for (std::size_t i = 0; i < features.size(); ++i) {
        out[i] = std::tanh(features[i]) * (std::numbers::pi / 2.0);
    }
    return out;
}

std::vector<double> embed_angles_derivative(std::span<const double> features) {
    std::vector<double> out(features.size());
    for (std::size_t i = 0; i < features.size(); ++i) {
        const double t = std::tanh(features[i]);
        out[i] = (std::numbers::pi / 2.0) * (1.0 - t * t);
    }
    return out;
}

std::vector<std::pair<std::size_t, std::size_t>> entangling_pairs(std::size_t n_qubits) {
    std::vector<std::pair<std::size_t, std::size_t>> pairs;
    for (std::size_t start : {std::size_t{0}, std::size_t{1}}) {
        for (std::size_t q = start; q + 1 < n_qubits; q += 2) {
            pairs.emplace_back(q, q + 1);
        }
    }
    return pairs;
}

std::vector<GateOp> build_circuit(const QuantumLayerConfig &config, const CircuitParams &params,
                                  std::span<const double> input_angles) {
    config.validate();
    params.validate(config);
    const std::size_t n = config.n_qubits;
    if (input_angles.size() != n) {
        throw ShapeError("quantum layer expects " + std::to_string(n) + " input angles, got " +
                         std::to_string(input_angles.size()));
    }
    const auto pairs = entangling_pairs(n);
    std::vector<GateOp> ops;
    ops.reserve(2 * n + config.depth * (pairs.size() + n));
    for (std::size_t q = 0; q < n; ++q) {
        ops.push_back(GateOp::hadamard(q));
    }
    for (std::size_t q = 0; q < n; ++q) {
        ops.push_back(GateOp::ry(q, input_angles[q]));
    }
    for (std::size_t layer = 0; layer < config.depth; ++layer) {
        for (const auto &[c, t] : pairs) {
            ops.push_back(GateOp::cnot(c, t));
        }
        for (std::size_t q = 0; q < n; ++q) {
            ops.push_back(GateOp::ry(q, params.angles(layer, q)));
        }
    }
    return ops;
}

std::vector<double> quantum_forward(const QuantumLayerConfig &config, const CircuitParams &params,
                                    std::span<const double> input_angles, Exec exec) {
    const auto ops = build_circuit(config, params, input_angles);
    const auto state = apply_circuit(new_zero_state(config.n_qubits), ops, exec);
    std::vector<double> out(config.n_qubits);
    for (std::size_t q = 0; q < config.n_qubits; ++q) {
        out[q] = expect_z(state, q, exec);
    }
    return out;
}

namespace {

/// One shifted evaluation: which angle moves and in which direction.
struct Shift {
    bool is_input;
    std::size_t row; // input qubit, or layer
    std::size_t col; // qubit within the layer (params only)
    double delta;
};

std::vector<double> shifted_forward(const QuantumLayerConfig &config, CircuitParams params,
                                    std::vector<double> inputs, const Shift &s, Exec exec) {
    if (s.is_input) {
        inputs[s.row] += s.delta;
    } else {
        params.angles(s.row, s.col) += s.delta;
    }
    return quantum_forward(config, params, inputs, exec);
}

} // namespace

QuantumJacobian param_shift_grad(const QuantumLayerConfig &config, const CircuitParams &params,
                                 std::span<const double> input_angles, Exec exec) {
    config.validate();
    params.validate(config);
    const std::size_t n = config.n_qubits;
    if (input_angles.size() != n) {
        throw ShapeError("quantum layer expects " + std::to_string(n) + " input angles, got " +
                         std::to_string(input_angles.size()));
    }

    // angle order: inputs 0..n-1, then params row-major
    const std::size_t n_angles = n + config.depth * n;
    std::vector<Shift> shifts;
    shifts.reserve(2 * n_angles);
    for (std::size_t a = 0; a < n_angles; ++a) {
        const bool is_input = a < n;
        const std::size_t row = is_input ? a : (a - n) / n;
        const std::size_t col = is_input ? 0 : (a - n) % n;
        shifts.push_back({is_input, row, col, +QuantumLayerConfig::shift});
        shifts.push_back({is_input, row, col, -QuantumLayerConfig::shift});
    }

    const std::vector<double> inputs(input_angles.begin(), input_angles.end());
    std::vector<std::vector<double>> results(shifts.size());
    // Small registers: parallelise across shifted circuits. Large registers:
    // run circuits one after another and let the gate kernels fan out instead.
    const bool wide_register = (std::size_t{1} << n) >= kernels::kParallelThreshold;
    if (exec == Exec::parallel && !wide_register) {
#pragma omp parallel for schedule(dynamic)
        for (std::int64_t i = 0; i < static_cast<std::int64_t>(shifts.size()); ++i) {
            const auto idx = static_cast<std::size_t>(i);
            results[idx] = shifted_forward(config, params, inputs, shifts[idx], Exec::serial);
        }
    } else {
        for (std::size_t i = 0; i < shifts.size(); ++i) {
            results[i] = shifted_forward(config, params, inputs, shifts[i], exec);
        }
    }

    QuantumJacobian jac{Matrix(config.depth * n, n), Matrix(n, n)};
    for (std::size_t a = 0; a < n_angles; ++a) {
        const auto &plus = results[2 * a];
        const auto &minus = results[2 * a + 1];
        auto row = a < n ? jac.wrt_inputs.row(a) : jac.wrt_params.row(a - n);
        for (std::size_t k = 0; k < n; ++k) {
            row[k] = (plus[k] - minus[k]) / 2.0;
        }
    }
    return jac;
}

} // namespace qdressed
