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
#include <vector>

#include <gtest/gtest.h>

#include "oracles/numeric.hpp"
#include "qdressed/error.hpp"
#include "qdressed/lora.hpp"
#include "qdressed/model.hpp"
#include "qdressed/trainer.hpp"

using namespace qdressed;

namespace {

LoraAdapter worked_example() {
    LoraAdapter ad;
    ad.base = LinearLayer{Matrix(2, 2), std::nullopt};
    ad.base.weights(0, 0) = 1.0;
    ad.base.weights(1, 1) = 1.0;
    ad.rank = 1;
    ad.alpha = 2.0;
    ad.dropout_p = 0.0;
    ad.a = Matrix(2, 1);
    ad.a(0, 0) = 1.0;
    ad.b = Matrix(1, 2);
    ad.b(0, 1) = 1.0;
    return ad;
}

LoraAdapter random_adapter(std::uint64_t seed, std::size_t out, std::size_t in,
                           LoraSettings settings = {}) {
    Rng rng(seed);
    auto ad = LoraAdapter::wrap(LinearLayer::init(in, out, true, rng), settings, rng);
    for (auto &v : ad.b.values()) {
        v = rng.normal(0.0, 0.5);
    }
    return ad;
}

std::vector<double> random_vector(std::size_t n, Rng &rng) {
    std::vector<double> x(n);
    for (auto &v : x) {
        v = rng.normal(0.0, 2.0);
    }
    return x;
}

} // namespace

TEST(LoraSettings, Defaults) {
    const LoraSettings s;
    EXPECT_EQ(s.rank, 8U);
    EXPECT_EQ(s.alpha, 16.0);
    EXPECT_EQ(s.dropout, 0.6);
    EXPECT_THROW((LoraSettings{0, 16.0, 0.1}.validate()), ArgumentError);
    EXPECT_THROW((LoraSettings{8, 0.0, 0.1}.validate()), ArgumentError);
    EXPECT_THROW((LoraSettings{8, 16.0, 1.0}.validate()), ArgumentError);
}

TEST(LoraForward, FreshAdapterReproducesBase) {
    Rng rng(1);
    const auto base = LinearLayer::init(6, 3, true, rng);
    const auto ad = LoraAdapter::wrap(base, {}, rng);
    EXPECT_EQ(ad.b, Matrix(8, 6));
    EXPECT_EQ(ad.a.rows(), 3U);
    EXPECT_EQ(ad.a.cols(), 8U);
    for (int i = 0; i < 50; ++i) {
        const auto x = random_vector(6, rng);
        EXPECT_EQ(lora_forward(ad, x, std::span<const double>{}), linear_forward(base, x));
    }
}

TEST(LoraForward, WorkedExample) {
    const auto y = lora_forward(worked_example(), std::vector{0.0, 1.0}, std::span<const double>{});
    EXPECT_EQ(y, (std::vector{2.0, 1.0}));
}

TEST(LoraForward, SurvivorsScaledByTwoAndAHalf) {
    auto ad = random_adapter(2, 3, 40, {4, 8.0, 0.6});
    ad.training_mode = true;
    Rng rng(3);
    const auto mask = draw_dropout_mask(ad, rng);
    ASSERT_EQ(mask.size(), 40U);
    for (double m : mask) {
        EXPECT_TRUE(m == 0.0 || m == 2.5) << m;
    }
}

TEST(LoraForward, DropoutPreservesExpectation) {
    auto ad = random_adapter(4, 2, 5, {2, 4.0, 0.6});
    ad.training_mode = true;
    const std::vector x{1.0, -2.0, 0.5, 3.0, -0.25};
    std::vector<double> mean(x.size(), 0.0);
    constexpr int kMasks = 20000;
    Rng rng(5);
    for (int i = 0; i < kMasks; ++i) {
        const auto mask = draw_dropout_mask(ad, rng);
        for (std::size_t j = 0; j < x.size(); ++j) {
            mean[j] += mask[j] * x[j] / kMasks;
        }
    }
    for (std::size_t j = 0; j < x.size(); ++j) {
        EXPECT_LE(std::fabs(mean[j] - x[j]), 0.02 * std::fabs(x[j])) << j;
    }
}

TEST(LoraForward, EvalModeIgnoresDropout) {
    auto ad = random_adapter(6, 3, 4);
    Rng rng(7);
    EXPECT_TRUE(draw_dropout_mask(ad, rng).empty());
    const std::vector x{1.0, 2.0, 3.0, 4.0};
    EXPECT_EQ(lora_forward(ad, x, rng), lora_forward(ad, x, std::span<const double>{}));
}

TEST(LoraForward, BasePathIsNotDropped) {
    auto ad = random_adapter(8, 2, 3);
    ad.training_mode = true;
    const std::vector<double> all_dropped(3, 0.0);
    const std::vector x{0.4, -0.3, 1.1};
    EXPECT_EQ(lora_forward(ad, x, all_dropped), linear_forward(ad.base, x));
}

TEST(LoraForward, MaskMisuseIsUsageError) {
    auto ad = random_adapter(9, 2, 3);
    const std::vector x{0.4, -0.3, 1.1};
    EXPECT_THROW(lora_forward(ad, x, std::vector{1.0, 1.0, 1.0}), UsageError);
    ad.training_mode = true;
    EXPECT_THROW(lora_forward(ad, x, std::span<const double>{}), UsageError);
    EXPECT_THROW(lora_forward(ad, x, std::vector{1.0, 1.0}), UsageError);
    EXPECT_THROW(lora_backward(ad, x, std::vector{1.0, 1.0}, std::span<const double>{}),
                 UsageError);
    EXPECT_THROW(lora_forward(ad, std::vector{1.0}, std::vector{1.0}), ShapeError);
}

TEST(Merge, ZeroBGivesBase) {
    Rng rng(10);
    const auto base = LinearLayer::init(5, 3, true, rng);
    EXPECT_EQ(merge(LoraAdapter::wrap(base, {}, rng)), base);
}

TEST(Merge, WorkedExample) {
    const auto merged = merge(worked_example());
    Matrix expected(2, 2);
    expected(0, 0) = 1.0;
    expected(0, 1) = 2.0;
    expected(1, 1) = 1.0;
    EXPECT_EQ(merged.weights, expected);
    EXPECT_FALSE(merged.bias.has_value());
}

TEST(Merge, EquivalentToAdapterForward) {
    const auto ad = random_adapter(11, 4, 7);
    const auto merged = merge(ad);
    Rng rng(12);
    for (int i = 0; i < 100; ++i) {
        const auto x = random_vector(7, rng);
        const auto y1 = lora_forward(ad, x, std::span<const double>{});
        const auto y2 = linear_forward(merged, x);
        EXPECT_LE(oracle::max_abs_error(y1, y2), 1e-10);
    }
}

TEST(Merge, DoublingAlphaDoublesDelta) {
    auto ad = random_adapter(13, 3, 5);
    auto doubled = ad;
    doubled.alpha *= 2.0;
    Rng rng(14);
    for (int i = 0; i < 50; ++i) {
        const auto x = random_vector(5, rng);
        const auto base = linear_forward(ad.base, x);
        const auto y1 = lora_forward(ad, x, std::span<const double>{});
        const auto y2 = lora_forward(doubled, x, std::span<const double>{});
        for (std::size_t j = 0; j < 3; ++j) {
            EXPECT_NEAR(y2[j] - base[j], 2.0 * (y1[j] - base[j]), 1e-12);
        }
    }
}

TEST(LoraBackward, ZeroUpstreamGivesZeroGradients) {
    const auto ad = random_adapter(15, 3, 3);
    const auto g = lora_backward(ad, std::vector{1.0, 2.0, 3.0}, std::vector<double>(3, 0.0),
                                 std::span<const double>{});
    for (double v : g.a.values()) {
        EXPECT_EQ(v, 0.0);
    }
    for (double v : g.b.values()) {
        EXPECT_EQ(v, 0.0);
    }
}

TEST(LoraBackward, FactorGradientsMatchFiniteDifferences) {
    auto ad = random_adapter(16, 3, 3, {2, 16.0, 0.6});
    const std::vector x{0.7, -1.2, 0.4};
    const std::vector up{0.5, -0.25, 1.5};
    auto objective = [&] {
        const auto y = lora_forward(ad, x, std::span<const double>{});
        double s = 0.0;
        for (std::size_t i = 0; i < y.size(); ++i) {
            s += up[i] * y[i];
        }
        return s;
    };
    const auto g = lora_backward(ad, x, up, std::span<const double>{});
    const auto fd_a = oracle::central_difference_inplace(ad.a.values(), objective);
    const auto fd_b = oracle::central_difference_inplace(ad.b.values(), objective);
    EXPECT_LE(oracle::max_abs_error(g.a.values(), fd_a), 1e-6);
    EXPECT_LE(oracle::max_abs_error(g.b.values(), fd_b), 1e-6);

    auto xv = x;
    const auto fd_x = oracle::central_difference_inplace(xv, [&] {
        const auto y = lora_forward(ad, xv, std::span<const double>{});
        return up[0] * y[0] + up[1] * y[1] + up[2] * y[2];
    });
    EXPECT_LE(oracle::max_abs_error(g.input, fd_x), 1e-6);
}

TEST(LoraBackward, BaseFrozenThroughTraining) {
    auto model = make_model({6, 2, 1, 3}, 17);
    attach_lora(model, {}, 18);
    const auto pre_base = std::get<LoraAdapter>(model.pre_net).base;
    const auto post_base = std::get<LoraAdapter>(model.post_net).base;
    const auto a_before = std::get<LoraAdapter>(model.pre_net).a;

    set_training_mode(model, true);
    Rng rng(19);
    auto params = trainable_parameters(model);
    std::size_t n = 0;
    for (auto p : params) {
        n += p.size();
    }
    Optimizer opt(OptimizerKind::adam, 0.01, n);
    for (int step = 0; step < 100; ++step) {
        const auto x = random_vector(6, rng);
        const auto masks = draw_dropout_masks(model, rng);
        const auto g = backward(model, x, rng.index(3), masks);
        opt.step(params, g.flatten());
    }
    EXPECT_EQ(std::get<LoraAdapter>(model.pre_net).base, pre_base);
    EXPECT_EQ(std::get<LoraAdapter>(model.post_net).base, post_base);
    EXPECT_NE(std::get<LoraAdapter>(model.pre_net).a, a_before);
}
