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
#include <span>
#include <string>
#include <vector>

#include "qdressed/matrix.hpp"

namespace qdressed {

/// Feature rows with integer class labels in [0, class_names.size()).
struct LabeledDataset {
    Matrix features; // N × d
    std::vector<std::size_t> labels;
    std::vector<std::string> class_names;

    [[nodiscard]] std::size_t size() const noexcept { return labels.size(); }
    [[nodiscard]] std::size_t dim() const noexcept { return features.cols(); }
    [[nodiscard]] std::size_t n_classes() const noexcept { return class_names.size(); }
    [[nodiscard]] bool empty() const noexcept { return labels.empty(); }

    [[nodiscard]] std::span<const double> row(std::size_t i) const { return features.row(i); }

    /// Throws ShapeError / ArgumentError when rows and labels disagree or a label is out of range.
    void validate() const;

    /// Rows at `indices`, in that order, with the same class names.
    [[nodiscard]] LabeledDataset subset(std::span<const std::size_t> indices) const;

    friend bool operator==(const LabeledDataset &, const LabeledDataset &) = default;
};

} // namespace qdressed
