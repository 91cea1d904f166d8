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
#include <string>
#include <utility>

#include "qdressed/error.hpp"
#include "qdressed/statevec.hpp"

namespace qdressed {

namespace {

void check_qubit(std::size_t q, std::size_t n_qubits, const char *what) {
    if (q >= n_qubits) {
        throw IndexError(std::string(what) + " qubit " + std::to_string(q) +
                         " out of range for a " + std::to_string(n_qubits) + "-qubit register");
    }
}

} // namespace

StateVector::StateVector(std::vector<Complex> amplitudes) : amps_(std::move(amplitudes)) {
    const std::size_t dim = amps_.size();
    if (dim < 2 || (dim & (dim - 1)) != 0 || dim > (std::size_t{1} << kMaxQubits)) {
        throw SizeError("state vector length must be a power of two in [2, 2^24], got " +
                        std::to_string(dim));
    }
    while ((std::size_t{1} << n_qubits_) < dim) {
        ++n_qubits_;
    }
}

double StateVector::norm_squared() const noexcept { return kernels::omp::norm_squared(amps_); }

StateVector new_zero_state(std::size_t n_qubits) {
    return basis_state(n_qubits, 0);
}

StateVector basis_state(std::size_t n_qubits, std::size_t index) {
    if (n_qubits < 1 || n_qubits > kMaxQubits) {
        throw SizeError("n_qubits must be in [1, " + std::to_string(kMaxQubits) + "], got " +
                        std::to_string(n_qubits));
    }
    const std::size_t dim = std::size_t{1} << n_qubits;
    if (index >= dim) {
        throw IndexError("basis index " + std::to_string(index) + " out of range");
    }
    std::vector<Complex> amps(dim, Complex{0.0, 0.0});
    amps[index] = Complex{1.0, 0.0};
    return StateVector(std::move(amps));
}

void validate(const GateOp &op, std::size_t n_qubits) {
    check_qubit(op.target, n_qubits, "target");
    switch (op.kind) {
    case GateKind::hadamard:
        break;
    case GateKind::rotation_y:
        if (!std::isfinite(op.angle)) {
            throw ArgumentError("RY angle must be finite");
        }
        break;
    case GateKind::controlled_not:
        if (!op.control) {
            throw ArgumentError("CNOT requires a control qubit");
        }
        if (*op.control == op.target) {
            throw ArgumentError("CNOT control and target must differ (both " +
                                std::to_string(op.target) + ")");
        }
        check_qubit(*op.control, n_qubits, "control");
        break;
    }
}

StateVector apply_hadamard(StateVector state, std::size_t target, Exec exec) {
    check_qubit(target, state.n_qubits(), "target");
    if (exec == Exec::serial) {
        kernels::serial::hadamard(state.amplitudes(), target);
    } else {
        kernels::omp::hadamard(state.amplitudes(), target);
    }
    return state;
}

StateVector apply_ry(StateVector state, std::size_t target, double theta, Exec exec) {
    validate(GateOp::ry(target, theta), state.n_qubits());
    if (exec == Exec::serial) {
        kernels::serial::ry(state.amplitudes(), target, theta);
    } else {
        kernels::omp::ry(state.amplitudes(), target, theta);
    }
    return state;
}

StateVector apply_cnot(StateVector state, std::size_t control, std::size_t target, Exec exec) {
    validate(GateOp::cnot(control, target), state.n_qubits());
    if (exec == Exec::serial) {
        kernels::serial::cnot(state.amplitudes(), control, target);
    } else {
        kernels::omp::cnot(state.amplitudes(), control, target);
    }
    return state;
}

double expect_z(const StateVector &state, std::size_t wire, Exec exec) {
    check_qubit(wire, state.n_qubits(), "wire");
    const double e = exec == Exec::serial ? kernels::serial::expect_z(state.amplitudes(), wire)
                                          : kernels::omp::expect_z(state.amplitudes(), wire);
    // rounding can push a saturated expectation a few ulps past ±1
    return std::clamp(e, -1.0, 1.0);
}

StateVector apply_gate(StateVector state, const GateOp &op, Exec exec) {
    switch (op.kind) {
    case GateKind::hadamard:
        return apply_hadamard(std::move(state), op.target, exec);
    case GateKind::rotation_y:
        return apply_ry(std::move(state), op.target, op.angle, exec);
    case GateKind::controlled_not:
        if (!op.control) {
            throw ArgumentError("CNOT requires a control qubit");
        }
        return apply_cnot(std::move(state), *op.control, op.target, exec);
    }
    return state;
}

StateVector apply_circuit(StateVector state, std::span<const GateOp> ops, Exec exec) {
    for (const auto &op : ops) {
        validate(op, state.n_qubits());
    }
    for (const auto &op : ops) {
        state = apply_gate(std::move(state), op, exec);
    }
    return state;
}

} // namespace qdressed
