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
 * Gate kernels over a raw amplitude buffer.
 *
 * Two implementations share one signature: `serial` is the straightforward
 * reference, `omp` splits the pair loop across OpenMP threads once the
 * register is large enough to amortise the fork. Both use the little-endian
 * convention: qubit k is bit k of the basis-state index.
 *
 * Kernels do not validate their arguments; StateVector does.
 */

#pragma once

#include <complex>
#include <cstddef>
#include <span>

namespace qdressed {

using Complex = std::complex<double>;

/// Selects the serial reference path or the OpenMP path.
enum class Exec { serial, parallel };

namespace kernels {

/// Registers below this many amplitudes are always processed on one thread.
inline constexpr std::size_t kParallelThreshold = std::size_t{1} << 12;

/// Fixed chunk length for reductions. Partial sums are combined in chunk order,
/// so the result does not depend on the thread count.
inline constexpr std::size_t kReductionChunk = std::size_t{1} << 12;

namespace serial {
void hadamard(std::span<Complex> amps, std::size_t target) noexcept;
void ry(std::span<Complex> amps, std::size_t target, double theta) noexcept;
void cnot(std::span<Complex> amps, std::size_t control, std::size_t target) noexcept;
double expect_z(std::span<const Complex> amps, std::size_t wire) noexcept;
double norm_squared(std::span<const Complex> amps) noexcept;
} // namespace serial

namespace omp {
void hadamard(std::span<Complex> amps, std::size_t target) noexcept;
void ry(std::span<Complex> amps, std::size_t target, double theta) noexcept;
void cnot(std::span<Complex> amps, std::size_t control, std::size_t target) noexcept;
double expect_z(std::span<const Complex> amps, std::size_t wire) noexcept;
double norm_squared(std::span<const Complex> amps) noexcept;
} // namespace omp

/// Index of the k-th basis state whose `bit` is 0.
constexpr std::size_t insert_zero_bit(std::size_t k, std::size_t bit) noexcept {
    const std::size_t low = k & ((std::size_t{1} << bit) - 1);
    return ((k >> bit) << (bit + 1)) | low;
}

} // namespace kernels
} // namespace qdressed
