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
#include <numbers>
#include <utility>
#include <vector>

#include "qdressed/kernels.hpp"

namespace qdressed::kernels::omp {

namespace {

using Index = std::int64_t;

/// Sum of `term(i)` over [0, n), reduced chunk by chunk in a fixed order.
template <class Term> double chunked_sum(std::size_t n, Term term) {
    const std::size_t n_chunks = (n + kReductionChunk - 1) / kReductionChunk;
    std::vector<double> partial(n_chunks, 0.0);
#pragma omp parallel for schedule(static) if (n >= kParallelThreshold)
    for (Index c = 0; c < static_cast<Index>(n_chunks); ++c) {
        const std::size_t begin = static_cast<std::size_t>(c) * kReductionChunk;
        const std::size_t end = begin + kReductionChunk < n ? begin + kReductionChunk : n;
        double acc = 0.0;
        for (std::size_t i = begin; i < end; ++i) {
            acc += term(i);
        }
        partial[static_cast<std::size_t>(c)] = acc;
    }
    double total = 0.0;
    for (const double p : partial) {
        total += p;
    }
    return total;
}

} // namespace

void hadamard(std::span<Complex> amps, std::size_t target) noexcept {
    const auto half = static_cast<Index>(amps.size() / 2);
    const std::size_t stride = std::size_t{1} << target;
    const double s = std::numbers::sqrt2 / 2.0;
    Complex *data = amps.data();
#pragma omp parallel for schedule(static) if (amps.size() >= kParallelThreshold)
    for (Index k = 0; k < half; ++k) {
        const std::size_t i0 = insert_zero_bit(static_cast<std::size_t>(k), target);
        const std::size_t i1 = i0 | stride;
        const Complex a0 = data[i0];
        const Complex a1 = data[i1];
        data[i0] = s * (a0 + a1);
        data[i1] = s * (a0 - a1);
    }
}

void ry(std::span<Complex> amps, std::size_t target, double theta) noexcept {
    const auto half = static_cast<Index>(amps.size() / 2);
    const std::size_t stride = std::size_t{1} << target;
    const double c = std::cos(theta / 2.0);
    const double s = std::sin(theta / 2.0);
    Complex *data = amps.data();
#pragma omp parallel for schedule(static) if (amps.size() >= kParallelThreshold)
    for (Index k = 0; k < half; ++k) {
        const std::size_t i0 = insert_zero_bit(static_cast<std::size_t>(k), target);
        const std::size_t i1 = i0 | stride;
        const Complex a0 = data[i0];
        const Complex a1 = data[i1];
        data[i0] = c * a0 - s * a1;
        data[i1] = s * a0 + c * a1;
    }
}

void cnot(std::span<Complex> amps, std::size_t control, std::size_t target) noexcept {
    const auto quarter = static_cast<Index>(amps.size() / 4);
    const std::size_t lo = control < target ? control : target;
    const std::size_t hi = control < target ? target : control;
    const std::size_t cbit = std::size_t{1} << control;
    const std::size_t tbit = std::size_t{1} << target;
    Complex *data = amps.data();
#pragma omp parallel for schedule(static) if (amps.size() >= kParallelThreshold)
    for (Index k = 0; k < quarter; ++k) {
        const std::size_t base =
            insert_zero_bit(insert_zero_bit(static_cast<std::size_t>(k), lo), hi) | cbit;
        std::swap(data[base], data[base | tbit]);
    }
}

double expect_z(std::span<const Complex> amps, std::size_t wire) noexcept {
    const std::size_t bit = std::size_t{1} << wire;
    const Complex *data = amps.data();
    return chunked_sum(amps.size(), [=](std::size_t i) {
        const double p = std::norm(data[i]);
        return (i & bit) ? -p : p;
    });
}

double norm_squared(std::span<const Complex> amps) noexcept {
    const Complex *data = amps.data();
    return chunked_sum(amps.size(), [=](std::size_t i) { return std::norm(data[i]); });
}

} // namespace qdressed::kernels::omp
