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
 * Variational circuit used as the quantum head of the dressed network.
 *
 * Layout on n qubits for input angles φ and trainable angles θ (depth × n):
 *
 *     H on every qubit
 *     RY(φ_q) on every qubit q
 *     repeat depth times:
 *         CNOT(q, q+1) for even q, then CNOT(q, q+1) for odd q
 *         RY(θ_{l,q}) on every qubit q
 *     read out ⟨Z_q⟩ on every qubit q
 *
 * Every angle enters through an RY gate, so the parameter-shift rule with a
 * shift of π/2 gives exact derivatives.
 */

#pragma once

#include <cstddef>
#include <numbers>
#include <span>
#include <vector>

#include "qdressed/matrix.hpp"
#include "qdressed/rng.hpp"
#include "qdressed/statevec.hpp"

namespace qdressed {

inline constexpr std::size_t kMaxDepth = 64;

struct QuantumLayerConfig {
    std::size_t n_qubits{4};
    std::size_t depth{4};

    static constexpr double shift = std::numbers::pi / 2.0;

    /// Throws SizeError when n_qubits or depth is out of range.
    void validate() const;

    friend bool operator==(const QuantumLayerConfig &, const QuantumLayerConfig &) = default;
};

/// Trainable rotation angles, one row per entangling block.
struct CircuitParams {
    Matrix angles; // depth × n_qubits, radians

    /// Seeded uniform initialisation in [-0.01, 0.01].
    static CircuitParams init(const QuantumLayerConfig &config, Rng &rng);
    static CircuitParams zeros(const QuantumLayerConfig &config);

    /// Throws ShapeError / ArgumentError if the angles do not fit `config` or are not finite.
    void validate(const QuantumLayerConfig &config) const;

    friend bool operator==(const CircuitParams &, const CircuitParams &) = default;
};

/// tanh(x)·π/2 elementwise. Throws ShapeError if `features.size() != n_qubits`.
std::vector<double> embed_angles(std::span<const double> features, std::size_t n_qubits);

/// Derivative of embed_angles with respect to its input, elementwise.
std::vector<double> embed_angles_derivative(std::span<const double> features);

/// Gate list realised by quantum_forward, for inspection and oracle tests.
std::vector<GateOp> build_circuit(const QuantumLayerConfig &config, const CircuitParams &params,
                                  std::span<const double> input_angles);

/// Pairs (control, target) of one entangling block, in application order.
std::vector<std::pair<std::size_t, std::size_t>> entangling_pairs(std::size_t n_qubits);

/// ⟨Z_q⟩ for each qubit q. Deterministic.
std::vector<double> quantum_forward(const QuantumLayerConfig &config, const CircuitParams &params,
                                    std::span<const double> input_angles,
                                    Exec exec = Exec::parallel);

/**
 * Jacobian of quantum_forward.
 *
 * `wrt_params(l * n_qubits + q, k)` is ∂⟨Z_k⟩/∂θ_{l,q};
 * `wrt_inputs(q, k)` is ∂⟨Z_k⟩/∂φ_q.
 */
struct QuantumJacobian {
    Matrix wrt_params; // (depth·n_qubits) × n_qubits
    Matrix wrt_inputs; // n_qubits × n_qubits
};

/// Parameter-shift Jacobian: (f(φ+π/2) − f(φ−π/2))/2 for every angle.
/// With Exec::parallel the 2·(depth+1)·n shifted circuits run as an OpenMP map.
QuantumJacobian param_shift_grad(const QuantumLayerConfig &config, const CircuitParams &params,
                                 std::span<const double> input_angles,
                                 Exec exec = Exec::parallel);

} // namespace qdressed
