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
#include <string>

#include "qdressed/dataset.hpp"
#include "qdressed/error.hpp"

namespace qdressed {

void LabeledDataset::validate() const {
    if (features.rows() != labels.size()) {
        throw ShapeError("dataset has " + std::to_string(features.rows()) + " feature rows but " +
                         std::to_string(labels.size()) + " labels");
    }
    for (std::size_t i = 0; i < labels.size(); ++i) {
        if (labels[i] >= class_names.size()) {
            throw ArgumentError("row " + std::to_string(i) + " has label " +
                                std::to_string(labels[i]) + " but only " +
                                std::to_string(class_names.size()) + " classes exist");
        }
    }
}

LabeledDataset LabeledDataset::subset(std::span<const std::size_t> indices) const {
    LabeledDataset out{Matrix(indices.size(), dim()), {}, class_names};
    out.labels.reserve(indices.size());
    for (std::size_t i = 0; i < indices.size(); ++i) {
        if (indices[i] >= size()) {
            throw IndexError("subset row " + std::to_string(indices[i]) + " out of range");
        }
        const auto src = row(indices[i]);
        std::copy(src.begin(), src.end(), out.features.row(i).begin());
        out.labels.push_back(labels[indices[i]]);
    }
    return out;
}

} // namespace qdressed
