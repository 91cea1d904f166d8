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
#include <numbers>
#include <utility>

#include "qdressed/kernels.hpp"

namespace qdressed::kernels::serial {

void hadamard(std::span<Complex> amps, std::size_t target) noexcept {
    const std::size_t half = amps.size() / 2;
    const std::size_t stride = std::size_t{1} << target;
    const double s = std::numbers::sqrt2 / 2.0;
    for (std::size_t k = 0; k < half; ++k) {
        const std::size_t i0 = insert_zero_bit(k, target);
        const std::size_t i1 = i0 | stride;
        const Complex a0 = amps[i0];
        const Complex a1 = amps[i1];
        amps[i0] = s * (a0 + a1);
        amps[i1] = s * (a0 - a1);
    }
}

void ry(std::span<Complex> amps, std::size_t target, double theta) noexcept {
    const std::size_t half = amps.size() / 2;
    const std::size_t stride = std::size_t{1} << target;
    const double c = std::cos(theta / 2.0);
    const double s = std::sin(theta / 2.0);
    for (std::size_t k = 0; k < half; ++k) {
        const std::size_t i0 = insert_zero_bit(k, target);
        const std::size_t i1 = i0 | stride;
        const Complex a0 = amps[i0];
        const Complex a1 = amps[i1];
        amps[i0] = c * a0 - s * a1;
        amps[i1] = s * a0 + c * a1;
    }
}

void cnot(std::span<Complex> amps, std::size_t control, std::size_t target) noexcept {
    const std::size_t quarter = amps.size() / 4;
    const std::size_t lo = control < target ? control : target;
    const std::size_t hi = control < target ? target : control;
    const std::size_t cbit = std::size_t{1} << control;
    const std::size_t tbit = std::size_t{1} << target;
    for (std::size_t k = 0; k < quarter; ++k) {
        const std::size_t base = insert_zero_bit(insert_zero_bit(k, lo), hi) | cbit;
        std::swap(amps[base], amps[base | tbit]);
    }
}

double expect_z(std::span<const Complex> amps, std::size_t wire) noexcept {
    const std::size_t bit = std::size_t{1} << wire;
    double acc = 0.0;
    for (std::size_t i = 0; i < amps.size(); ++i) {
        const double p = std::norm(amps[i]);
        acc += (i & bit) ? -p : p;
    }
    return acc;
}

double norm_squared(std::span<const Complex> amps) noexcept {
    double acc = 0.0;
    for (const auto &a : amps) {
        acc += std::norm(a);
    }
    return acc;
}

} // namespace qdressed::kernels::serial
