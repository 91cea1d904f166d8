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
 * Model checkpoint as a single JSON document (format "qdressed-checkpoint",
 * version 1). See README.md for the field layout. Doubles are written with
 * round-trip precision, so save → load reproduces every parameter bit-exactly.
 */

#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "qdressed/model.hpp"

namespace qdressed {

inline constexpr int kCheckpointVersion = 1;

struct Checkpoint {
    DressedModel model;
    std::vector<std::string> class_names;
    std::uint64_t seed{0};

    friend bool operator==(const Checkpoint &, const Checkpoint &) = default;
};

std::string checkpoint_to_json(const Checkpoint &ckpt);

/// Throws ParseError (line 0 for structural errors) when the document is not a valid checkpoint.
Checkpoint checkpoint_from_json(const std::string &text);

void save_checkpoint(const Checkpoint &ckpt, const std::filesystem::path &path);

/// Throws IoError when the file is missing, ParseError when it is malformed.
Checkpoint load_checkpoint(const std::filesystem::path &path);

} // namespace qdressed
