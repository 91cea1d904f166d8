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

#include "qdressed/kernels.hpp"

namespace qdressed {

inline constexpr std::size_t kMaxQubits = 24;

/**
 * Dense pure state of an n-qubit register.
 *
 * Amplitude i belongs to the basis state whose bit k is the value of qubit k
 * (little-endian). The free functions below take the state by value and
 * return the updated state, so callers that `std::move` in get in-place
 * updates without copies.
 */
class StateVector {
  public:
    /// Builds a state from explicit amplitudes; the length must be a power of two
    /// between 2 and 2^24. No normalisation is performed.
    explicit StateVector(std::vector<Complex> amplitudes);

    [[nodiscard]] std::size_t n_qubits() const noexcept { return n_qubits_; }
    [[nodiscard]] std::size_t dim() const noexcept { return amps_.size(); }

    [[nodiscard]] std::span<const Complex> amplitudes() const noexcept { return amps_; }
    [[nodiscard]] std::span<Complex> amplitudes() noexcept { return amps_; }

    Complex operator[](std::size_t i) const noexcept { return amps_[i]; }

    [[nodiscard]] double norm_squared() const noexcept;

  private:
    std::size_t n_qubits_{0};
    std::vector<Complex> amps_;
};

/// |0…0⟩ on `n_qubits` qubits. Throws SizeError outside [1, 24].
StateVector new_zero_state(std::size_t n_qubits);

/// |index⟩ on `n_qubits` qubits.
StateVector basis_state(std::size_t n_qubits, std::size_t index);

enum class GateKind { hadamard, rotation_y, controlled_not };

/// One gate of the {H, RY, CNOT} set.
struct GateOp {
    GateKind kind{GateKind::hadamard};
    std::size_t target{0};
    std::optional<std::size_t> control;
    double angle{0.0};

    static GateOp hadamard(std::size_t target) { return {GateKind::hadamard, target, {}, 0.0}; }
    static GateOp ry(std::size_t target, double theta) {
        return {GateKind::rotation_y, target, {}, theta};
    }
    static GateOp cnot(std::size_t control, std::size_t target) {
        return {GateKind::controlled_not, target, control, 0.0};
    }

    friend bool operator==(const GateOp &, const GateOp &) = default;
};

/// Throws IndexError / ArgumentError if `op` is not valid on `n_qubits` qubits.
void validate(const GateOp &op, std::size_t n_qubits);

StateVector apply_hadamard(StateVector state, std::size_t target, Exec exec = Exec::parallel);
StateVector apply_ry(StateVector state, std::size_t target, double theta,
                     Exec exec = Exec::parallel);
StateVector apply_cnot(StateVector state, std::size_t control, std::size_t target,
                       Exec exec = Exec::parallel);

/// ⟨Z⟩ on `wire`, in [-1, 1] for a normalised state.
double expect_z(const StateVector &state, std::size_t wire, Exec exec = Exec::parallel);

StateVector apply_gate(StateVector state, const GateOp &op, Exec exec = Exec::parallel);

/// Applies `ops` in order. The first invalid op throws and nothing after it runs.
StateVector apply_circuit(StateVector state, std::span<const GateOp> ops,
                          Exec exec = Exec::parallel);

} // namespace qdressed
