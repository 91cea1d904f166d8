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

#include <cstdint>
#include <filesystem>
#include <span>
#include <string>
#include <string_view>

namespace qdressed {

inline constexpr std::uint64_t kFnv64Offset = 0xcbf29ce484222325ULL;
inline constexpr std::uint64_t kFnv64Prime = 0x100000001b3ULL;

/// FNV-1a, 64-bit.
constexpr std::uint64_t fnv1a64(std::string_view bytes,
                                std::uint64_t h = kFnv64Offset) noexcept {
    for (const char c : bytes) {
        h = (h ^ static_cast<unsigned char>(c)) * kFnv64Prime;
    }
    return h;
}

/// FNV-1a 64 of a file's bytes. Throws IoError if the file cannot be read.
std::uint64_t file_digest(const std::filesystem::path &path);

/// 16 lowercase hex digits.
std::string hex64(std::uint64_t value);

} // namespace qdressed
