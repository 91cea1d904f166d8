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
#include <cstdint>
#include <span>
#include <vector>

#include "qdressed/dataset.hpp"
#include "qdressed/kernels.hpp"

namespace qdressed {

struct SmoteConfig {
    std::size_t k_neighbors{5};
    std::uint64_t seed{0};

    void validate() const;
};

/// counts[c] = rows labelled c.
std::vector<std::size_t> class_counts(const LabeledDataset &ds);

/**
 * The `k` candidate rows closest to `query_row` in Euclidean distance, nearest
 * first. Ties go to the lower row index. Throws InsufficientDataError when
 * fewer than `k` candidates exist and ArgumentError if the query is among them.
 */
std::vector<std::size_t> knn_indices(const Matrix &features, std::size_t query_row,
                                     std::span<const std::size_t> candidate_rows, std::size_t k);

/**
 * Oversamples every minority class up to the majority count.
 *
 * Output rows: the input rows unchanged and in order, then synthetic rows
 * grouped by ascending class. Each synthetic row is x + λ·(x_nn − x) where x
 * is a random member of the class, x_nn is a random pick among its k nearest
 * same-class neighbours (k clamped to class size − 1) and λ ~ U[0, 1).
 * Draws come from a per-class stream derived from `cfg.seed`, so the output
 * is identical for Exec::serial and Exec::parallel.
 */
LabeledDataset smote_balance(const LabeledDataset &ds, const SmoteConfig &cfg,
                             Exec exec = Exec::parallel);

} // namespace qdressed
