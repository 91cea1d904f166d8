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
#include <cstdint>
#include <string>
#include <utility>

#include "qdressed/error.hpp"
#include "qdressed/rng.hpp"
#include "qdressed/smote.hpp"

namespace qdressed {

namespace {

double squared_distance(std::span<const double> a, std::span<const double> b) {
    double acc = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        const double d = a[i] - b[i];
        acc += d * d;
    }
    return acc;
}

struct Draw {
    std::size_t source;   // position within the class member list
    std::size_t neighbor; // position within the source's neighbour list
    double lambda;
};

} // namespace

void SmoteConfig::validate() const {
    if (k_neighbors < 1) {
        throw ArgumentError("SMOTE k_neighbors must be at least 1");
    }
}

std::vector<std::size_t> class_counts(const LabeledDataset &ds) {
    std::vector<std::size_t> counts(ds.n_classes(), 0);
    for (const auto label : ds.labels) {
        if (label >= counts.size()) {
            throw ArgumentError("label " + std::to_string(label) + " out of range");
        }
        ++counts[label];
    }
    return counts;
}

std::vector<std::size_t> knn_indices(const Matrix &features, std::size_t query_row,
                                     std::span<const std::size_t> candidate_rows, std::size_t k) {
    if (k < 1) {
        throw ArgumentError("knn_indices: k must be positive");
    }
    if (candidate_rows.size() < k) {
        throw InsufficientDataError("knn_indices: " + std::to_string(candidate_rows.size()) +
                                    " candidates for k = " + std::to_string(k));
    }
    if (query_row >= features.rows()) {
        throw IndexError("knn_indices: query row " + std::to_string(query_row) + " out of range");
    }
    const auto query = features.row(query_row);
    std::vector<std::pair<double, std::size_t>> scored;
    scored.reserve(candidate_rows.size());
    for (const auto r : candidate_rows) {
        if (r == query_row) {
            throw ArgumentError("knn_indices: candidate set contains the query row");
        }
        if (r >= features.rows()) {
            throw IndexError("knn_indices: candidate row " + std::to_string(r) + " out of range");
        }
        scored.emplace_back(squared_distance(query, features.row(r)), r);
    }
    const auto k_end = scored.begin() + static_cast<std::ptrdiff_t>(k);
    std::partial_sort(scored.begin(), k_end, scored.end());
    std::vector<std::size_t> out;
    out.reserve(k);
    for (auto it = scored.begin(); it != k_end; ++it) {
        out.push_back(it->second);
    }
    return out;
}

LabeledDataset smote_balance(const LabeledDataset &ds, const SmoteConfig &cfg, Exec exec) {
    cfg.validate();
    ds.validate();
    const auto counts = class_counts(ds);
    const std::size_t target = counts.empty() ? 0 : *std::max_element(counts.begin(), counts.end());

    std::vector<std::vector<std::size_t>> members(ds.n_classes());
    for (std::size_t i = 0; i < ds.size(); ++i) {
        members[ds.labels[i]].push_back(i);
    }

    std::size_t total_synthetic = 0;
    for (std::size_t c = 0; c < ds.n_classes(); ++c) {
        if (counts[c] < target && counts[c] < 2) {
            throw InsufficientDataError("class '" + ds.class_names[c] + "' has " +
                                        std::to_string(counts[c]) +
                                        " samples; SMOTE needs at least 2");
        }
        total_synthetic += target - counts[c];
    }

    LabeledDataset out{Matrix(ds.size() + total_synthetic, ds.dim()), ds.labels, ds.class_names};
    std::copy(ds.features.values().begin(), ds.features.values().end(),
              out.features.values().begin());
    out.labels.reserve(ds.size() + total_synthetic);

    std::size_t next_row = ds.size();
    for (std::size_t c = 0; c < ds.n_classes(); ++c) {
        const std::size_t deficit = target - counts[c];
        if (deficit == 0) {
            continue;
        }
        const auto &rows = members[c];
        const std::size_t k = std::min(cfg.k_neighbors, rows.size() - 1);

        Rng rng(derive_seed(cfg.seed, {c}));
        std::vector<Draw> draws(deficit);
        for (auto &d : draws) {
            d.source = static_cast<std::size_t>(rng.index(rows.size()));
            d.neighbor = static_cast<std::size_t>(rng.index(k));
            d.lambda = rng.uniform01();
        }

        // neighbour lists only for the members that were actually drawn
        std::vector<std::size_t> sources;
        for (const auto &d : draws) {
            sources.push_back(d.source);
        }
        std::sort(sources.begin(), sources.end());
        sources.erase(std::unique(sources.begin(), sources.end()), sources.end());
        std::vector<std::vector<std::size_t>> neighbors(sources.size());

        auto search = [&](std::size_t s) {
            std::vector<std::size_t> candidates;
            candidates.reserve(rows.size() - 1);
            for (std::size_t j = 0; j < rows.size(); ++j) {
                if (j != sources[s]) {
                    candidates.push_back(rows[j]);
                }
            }
            neighbors[s] = knn_indices(ds.features, rows[sources[s]], candidates, k);
        };
        if (exec == Exec::parallel) {
#pragma omp parallel for schedule(dynamic)
            for (std::int64_t s = 0; s < static_cast<std::int64_t>(sources.size()); ++s) {
                search(static_cast<std::size_t>(s));
            }
        } else {
            for (std::size_t s = 0; s < sources.size(); ++s) {
                search(s);
            }
        }

        for (const auto &d : draws) {
            const auto pos = static_cast<std::size_t>(
                std::lower_bound(sources.begin(), sources.end(), d.source) - sources.begin());
            const auto x = ds.row(rows[d.source]);
            const auto nn = ds.row(neighbors[pos][d.neighbor]);
            auto dst = out.features.row(next_row++);
            for (std::size_t j = 0; j < dst.size(); ++j) {
                dst[j] = x[j] + d.lambda * (nn[j] - x[j]);
            }
            out.labels.push_back(c);
        }
    }
    return out;
}

} // namespace qdressed
