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
#include <vector>

#include <gtest/gtest.h>

#include "oracles/dense_unitary.hpp"
#include "oracles/numeric.hpp"
#include "qdressed/error.hpp"
#include "qdressed/qlayer.hpp"

using namespace qdressed;

namespace {

struct Fixture {
    QuantumLayerConfig config;
    CircuitParams params;
    std::vector<double> angles;
};

Fixture random_fixture(Rng &rng) {
    Fixture f;
    f.config.n_qubits = 1 + rng.index(4);
    f.config.depth = rng.index(4);
    f.params.angles = Matrix(f.config.depth, f.config.n_qubits);
    for (auto &v : f.params.angles.values()) {
        v = rng.uniform(-std::numbers::pi, std::numbers::pi);
    }
    for (std::size_t q = 0; q < f.config.n_qubits; ++q) {
        f.angles.push_back(rng.uniform(-std::numbers::pi / 2, std::numbers::pi / 2));
    }
    return f;
}

// Dense-matrix simulation of the same layout, independent of the gate kernels.
std::vector<double> dense_forward(const Fixture &f) {
    const auto n = f.config.n_qubits;
    std::vector<oracle::C> state(std::size_t{1} << n, 0.0);
    state[0] = 1.0;
    for (std::size_t q = 0; q < n; ++q) {
        state = oracle::apply(oracle::lift(oracle::hadamard_2x2(), q, n), state);
    }
    for (std::size_t q = 0; q < n; ++q) {
        state = oracle::apply(oracle::lift(oracle::ry_2x2(f.angles[q]), q, n), state);
    }
    for (std::size_t l = 0; l < f.config.depth; ++l) {
        for (std::size_t start : {0U, 1U}) {
            for (std::size_t q = start; q + 1 < n; q += 2) {
                state = oracle::apply(oracle::cnot_full(q, q + 1, n), state);
            }
        }
        for (std::size_t q = 0; q < n; ++q) {
            state = oracle::apply(oracle::lift(oracle::ry_2x2(f.params.angles(l, q)), q, n),
                                  state);
        }
    }
    std::vector<double> out;
    for (std::size_t q = 0; q < n; ++q) {
        out.push_back(oracle::expect_z(state, q, n));
    }
    return out;
}

} // namespace

TEST(Embedding, ZeroMapsToZero) { EXPECT_EQ(embed_angles(std::vector{0.0}, 1)[0], 0.0); }

TEST(Embedding, SaturatesNearHalfPi) {
    const double v = embed_angles(std::vector{10.0}, 1)[0];
    EXPECT_NEAR(v, std::numbers::pi / 2, 1e-6);
    EXPECT_LT(v, std::numbers::pi / 2);
}

TEST(Embedding, UnitInput) {
    EXPECT_NEAR(embed_angles(std::vector{1.0}, 1)[0], 1.196309302683775, 1e-12);
}

TEST(Embedding, StaysInsideHalfPiBand) {
    Rng rng(31);
    for (int i = 0; i < 500; ++i) {
        const double x = rng.uniform(-50.0, 50.0);
        const double v = embed_angles(std::vector{x}, 1)[0];
        EXPECT_LE(std::fabs(v), std::numbers::pi / 2);
    }
}

TEST(Embedding, DerivativeMatchesFiniteDifference) {
    for (double x = -3.0; x <= 3.0; x += 0.37) {
        const auto fd = oracle::central_difference(std::vector{x}, [](std::span<const double> p) {
            return embed_angles(p, 1)[0];
        });
        EXPECT_NEAR(embed_angles_derivative(std::vector{x})[0], fd[0], 1e-8);
    }
}

TEST(Embedding, RejectsLengthMismatch) {
    EXPECT_THROW(embed_angles(std::vector{0.0, 1.0}, 3), ShapeError);
}

TEST(Config, Bounds) {
    EXPECT_NO_THROW((QuantumLayerConfig{24, 64}.validate()));
    EXPECT_NO_THROW((QuantumLayerConfig{1, 0}.validate()));
    EXPECT_THROW((QuantumLayerConfig{0, 1}.validate()), SizeError);
    EXPECT_THROW((QuantumLayerConfig{25, 1}.validate()), SizeError);
    EXPECT_THROW((QuantumLayerConfig{2, 65}.validate()), SizeError);
    EXPECT_EQ(QuantumLayerConfig::shift, std::numbers::pi / 2);
}

TEST(Params, InitRange) {
    Rng rng(2);
    const QuantumLayerConfig cfg{4, 4};
    const auto p = CircuitParams::init(cfg, rng);
    ASSERT_EQ(p.angles.rows(), 4U);
    ASSERT_EQ(p.angles.cols(), 4U);
    for (double v : p.angles.values()) {
        EXPECT_LE(std::fabs(v), 0.01);
    }
}

TEST(Forward, DepthZeroSingleQubitAtZero) {
    const QuantumLayerConfig cfg{1, 0};
    const auto out = quantum_forward(cfg, CircuitParams::zeros(cfg), std::vector{0.0});
    ASSERT_EQ(out.size(), 1U);
    EXPECT_NEAR(out[0], 0.0, 1e-12);
}

TEST(Forward, DepthZeroIsMinusSineOnGrid) {
    const QuantumLayerConfig cfg{1, 0};
    for (int i = 0; i < 100; ++i) {
        const double theta = -std::numbers::pi + 2 * std::numbers::pi * i / 99.0;
        const auto out = quantum_forward(cfg, CircuitParams::zeros(cfg), std::vector{theta});
        EXPECT_NEAR(out[0], -std::sin(theta), 1e-12) << theta;
    }
}

TEST(Forward, DepthOneZeroParamsTwoQubits) {
    const QuantumLayerConfig cfg{2, 1};
    const auto out = quantum_forward(cfg, CircuitParams::zeros(cfg), std::vector{0.0, 0.0});
    EXPECT_NEAR(out[0], 0.0, 1e-12);
    EXPECT_NEAR(out[1], 0.0, 1e-12);
}

TEST(Forward, MatchesDenseOracle) {
    Rng rng(37);
    for (int trial = 0; trial < 100; ++trial) {
        const auto f = random_fixture(rng);
        const auto got = quantum_forward(f.config, f.params, f.angles);
        const auto ref = dense_forward(f);
        for (std::size_t q = 0; q < got.size(); ++q) {
            EXPECT_NEAR(got[q], ref[q], 1e-12);
            EXPECT_GE(got[q], -1.0);
            EXPECT_LE(got[q], 1.0);
        }
    }
}

TEST(Forward, BrickPattern) {
    using P = std::vector<std::pair<std::size_t, std::size_t>>;
    EXPECT_EQ(entangling_pairs(1), P{});
    EXPECT_EQ(entangling_pairs(2), (P{{0, 1}}));
    EXPECT_EQ(entangling_pairs(5), (P{{0, 1}, {2, 3}, {1, 2}, {3, 4}}));
}

TEST(Forward, DeterministicAndExecIndependent) {
    Rng rng(41);
    for (int trial = 0; trial < 20; ++trial) {
        const auto f = random_fixture(rng);
        const auto a = quantum_forward(f.config, f.params, f.angles, Exec::serial);
        const auto b = quantum_forward(f.config, f.params, f.angles, Exec::serial);
        const auto c = quantum_forward(f.config, f.params, f.angles, Exec::parallel);
        EXPECT_EQ(a, b);
        EXPECT_EQ(a, c);
    }
}

TEST(Forward, RejectsShapeMismatch) {
    const QuantumLayerConfig cfg{2, 1};
    EXPECT_THROW(quantum_forward(cfg, CircuitParams::zeros(cfg), std::vector{0.0}), ShapeError);
    EXPECT_THROW(quantum_forward(cfg, CircuitParams::zeros({2, 2}), std::vector{0.0, 0.0}),
                 ShapeError);
}

TEST(ParamShift, SingleQubitAtZero) {
    const QuantumLayerConfig cfg{1, 0};
    const auto jac = param_shift_grad(cfg, CircuitParams::zeros(cfg), std::vector{0.0});
    EXPECT_NEAR(jac.wrt_inputs(0, 0), -1.0, 1e-12);
    EXPECT_EQ(jac.wrt_params.size(), 0U);
}

TEST(ParamShift, VanishesAtHalfPi) {
    const QuantumLayerConfig cfg{1, 0};
    const auto jac =
        param_shift_grad(cfg, CircuitParams::zeros(cfg), std::vector{std::numbers::pi / 2});
    EXPECT_NEAR(jac.wrt_inputs(0, 0), 0.0, 1e-12);
}

TEST(ParamShift, MatchesFiniteDifferences) {
    Rng rng(43);
    for (int trial = 0; trial < 120; ++trial) {
        const auto f = random_fixture(rng);
        const auto n = f.config.n_qubits;
        const auto jac = param_shift_grad(f.config, f.params, f.angles);
        for (std::size_t k = 0; k < n; ++k) {
            const auto fd_in = oracle::central_difference(f.angles, [&](std::span<const double> a) {
                return quantum_forward(f.config, f.params, a)[k];
            });
            for (std::size_t q = 0; q < n; ++q) {
                EXPECT_NEAR(jac.wrt_inputs(q, k), fd_in[q], 1e-5);
            }
            const auto flat = std::vector<double>(f.params.angles.values().begin(),
                                                  f.params.angles.values().end());
            const auto fd_p = oracle::central_difference(flat, [&](std::span<const double> a) {
                CircuitParams p{Matrix(f.config.depth, n)};
                std::copy(a.begin(), a.end(), p.angles.values().begin());
                return quantum_forward(f.config, p, f.angles)[k];
            });
            for (std::size_t j = 0; j < flat.size(); ++j) {
                EXPECT_NEAR(jac.wrt_params(j, k), fd_p[j], 1e-5);
            }
        }
    }
}

TEST(ParamShift, SerialAndParallelAgree) {
    Rng rng(47);
    for (int trial = 0; trial < 20; ++trial) {
        const auto f = random_fixture(rng);
        const auto a = param_shift_grad(f.config, f.params, f.angles, Exec::serial);
        const auto b = param_shift_grad(f.config, f.params, f.angles, Exec::parallel);
        EXPECT_EQ(a.wrt_params, b.wrt_params);
        EXPECT_EQ(a.wrt_inputs, b.wrt_inputs);
    }
}

TEST(ParamShift, WideRegisterSerialAndParallelAgree) {
    Rng rng(53);
    const QuantumLayerConfig cfg{12, 1};
    auto params = CircuitParams::init(cfg, rng);
    std::vector<double> angles(12);
    for (auto &a : angles) {
        a = rng.uniform(-1.0, 1.0);
    }
    const auto a = param_shift_grad(cfg, params, angles, Exec::serial);
    const auto b = param_shift_grad(cfg, params, angles, Exec::parallel);
    for (std::size_t i = 0; i < a.wrt_params.size(); ++i) {
        EXPECT_NEAR(a.wrt_params.values()[i], b.wrt_params.values()[i], 1e-12);
    }
    for (std::size_t i = 0; i < a.wrt_inputs.size(); ++i) {
        EXPECT_NEAR(a.wrt_inputs.values()[i], b.wrt_inputs.values()[i], 1e-12);
    }
}
