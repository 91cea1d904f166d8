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

// Serial reference kernels against their OpenMP counterparts.

#include <cstdint>
#include <vector>

#include <benchmark/benchmark.h>

#include "qdressed/kernels.hpp"
#include "qdressed/qlayer.hpp"
#include "qdressed/rng.hpp"
#include "qdressed/smote.hpp"

namespace {

using namespace qdressed;

std::vector<Complex> random_amplitudes(std::size_t n_qubits) {
    Rng rng(n_qubits);
    std::vector<Complex> v(std::size_t{1} << n_qubits);
    for (auto &a : v) {
        a = {rng.normal(), rng.normal()};
    }
    return v;
}

template <bool Parallel>
void BM_Hadamard(benchmark::State &state) {
    const auto n = static_cast<std::size_t>(state.range(0));
    auto amps = random_amplitudes(n);
    std::size_t q = 0;
    for (auto _ : state) {
        if constexpr (Parallel) {
            kernels::omp::hadamard(amps, q);
        } else {
            kernels::serial::hadamard(amps, q);
        }
        q = (q + 1) % n;
        benchmark::DoNotOptimize(amps.data());
    }
    state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(amps.size()));
}

template <bool Parallel>
void BM_Ry(benchmark::State &state) {
    const auto n = static_cast<std::size_t>(state.range(0));
    auto amps = random_amplitudes(n);
    std::size_t q = 0;
    for (auto _ : state) {
        if constexpr (Parallel) {
            kernels::omp::ry(amps, q, 0.3);
        } else {
            kernels::serial::ry(amps, q, 0.3);
        }
        q = (q + 1) % n;
        benchmark::DoNotOptimize(amps.data());
    }
    state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(amps.size()));
}

template <bool Parallel>
void BM_Cnot(benchmark::State &state) {
    const auto n = static_cast<std::size_t>(state.range(0));
    auto amps = random_amplitudes(n);
    std::size_t q = 0;
    for (auto _ : state) {
        if constexpr (Parallel) {
            kernels::omp::cnot(amps, q, (q + 1) % n);
        } else {
            kernels::serial::cnot(amps, q, (q + 1) % n);
        }
        q = (q + 1) % n;
        benchmark::DoNotOptimize(amps.data());
    }
    state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(amps.size()));
}

template <bool Parallel>
void BM_ExpectZ(benchmark::State &state) {
    const auto n = static_cast<std::size_t>(state.range(0));
    const auto amps = random_amplitudes(n);
    for (auto _ : state) {
        double e = 0.0;
        for (std::size_t q = 0; q < n; ++q) {
            e += Parallel ? kernels::omp::expect_z(amps, q) : kernels::serial::expect_z(amps, q);
        }
        benchmark::DoNotOptimize(e);
    }
}

template <Exec E>
void BM_ParamShift(benchmark::State &state) {
    const QuantumLayerConfig cfg{static_cast<std::size_t>(state.range(0)), 4};
    Rng rng(7);
    const auto params = CircuitParams::init(cfg, rng);
    std::vector<double> angles(cfg.n_qubits, 0.4);
    for (auto _ : state) {
        benchmark::DoNotOptimize(param_shift_grad(cfg, params, angles, E));
    }
}

template <Exec E>
void BM_Smote(benchmark::State &state) {
    const auto per_class = static_cast<std::size_t>(state.range(0));
    Rng rng(11);
    LabeledDataset ds;
    ds.class_names = {"a", "b"};
    const std::size_t minority = per_class / 4;
    ds.features = Matrix(per_class + minority, 32);
    for (auto &v : ds.features.values()) {
        v = rng.normal();
    }
    ds.labels.assign(per_class, 0);
    ds.labels.resize(per_class + minority, 1);
    for (auto _ : state) {
        benchmark::DoNotOptimize(smote_balance(ds, {5, 3}, E));
    }
}

} // namespace

BENCHMARK(BM_Hadamard<false>)->Name("hadamard/serial")->DenseRange(12, 20, 4);
BENCHMARK(BM_Hadamard<true>)->Name("hadamard/omp")->DenseRange(12, 20, 4);
BENCHMARK(BM_Ry<false>)->Name("ry/serial")->DenseRange(12, 20, 4);
BENCHMARK(BM_Ry<true>)->Name("ry/omp")->DenseRange(12, 20, 4);
BENCHMARK(BM_Cnot<false>)->Name("cnot/serial")->DenseRange(12, 20, 4);
BENCHMARK(BM_Cnot<true>)->Name("cnot/omp")->DenseRange(12, 20, 4);
BENCHMARK(BM_ExpectZ<false>)->Name("expect_z/serial")->DenseRange(12, 20, 4);
BENCHMARK(BM_ExpectZ<true>)->Name("expect_z/omp")->DenseRange(12, 20, 4);
BENCHMARK(BM_ParamShift<Exec::serial>)->Name("param_shift/serial")->Arg(4)->Arg(8)->Arg(12);
BENCHMARK(BM_ParamShift<Exec::parallel>)->Name("param_shift/parallel")->Arg(4)->Arg(8)->Arg(12);
BENCHMARK(BM_Smote<Exec::serial>)->Name("smote/serial")->Arg(400)->Arg(2000);
BENCHMARK(BM_Smote<Exec::parallel>)->Name("smote/parallel")->Arg(400)->Arg(2000);
BENCHMARK_MAIN();
