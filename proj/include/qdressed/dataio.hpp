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
 * Dataset ingestion and preparation.
 *
 * File formats (UTF-8, one sample per record):
 *
 *   embedding-csv   header `label,f0,...,f{d-1}`; label is a class name
 *   jsonl           {"label": "<class>", "features": [d numbers]} per line
 *   raw-text-csv    header with `content` and `sentiment` columns
 *                   (Kaggle layout `tweet_id,content,sentiment`; other
 *                   columns are ignored)
 */

#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <span>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "qdressed/dataset.hpp"

namespace qdressed {

enum class DataFormat { auto_detect, embedding_csv, jsonl, raw_text_csv };

/// "auto", "embedding-csv", "jsonl" or "raw-text-csv". Throws ArgumentError otherwise.
DataFormat parse_data_format(std::string_view name);
std::string_view to_string(DataFormat format);

struct RawRecord {
    std::string content;
    std::string sentiment;

    friend bool operator==(const RawRecord &, const RawRecord &) = default;
};

using LoadedData = std::variant<LabeledDataset, std::vector<RawRecord>>;

/// Embedding formats come back as a LabeledDataset with encode_labels ordering;
/// raw text comes back as records for hash_featurize. Throws IoError or ParseError.
LoadedData load_dataset(const std::filesystem::path &path, DataFormat format);

/// Same, reading from a stream. `auto_detect` is resolved from the header.
LoadedData load_dataset(std::istream &in, DataFormat format);

/// Resolves auto_detect from the file extension and header line.
DataFormat detect_format(const std::filesystem::path &path);

struct LabelEncoding {
    std::vector<std::size_t> labels;
    std::vector<std::string> class_names; // sorted, unique
};

/// Class names sorted lexicographically; labels are ranks in that order.
LabelEncoding encode_labels(std::span<const std::string> names);

/// Re-expresses `ds` against a fixed class list. Throws ArgumentError for an unknown class.
LabeledDataset remap_labels(const LabeledDataset &ds,
                            std::span<const std::string> class_names);

/// Tokens of `text`: lowercased ASCII, split on bytes that are neither ASCII
/// alphanumerics nor part of a multi-byte UTF-8 sequence.
std::vector<std::string> tokenize(std::string_view text);

/**
 * Hashed bag-of-words: each token adds ±1 to bucket fnv1a64(token) % dim,
 * the sign taken from the low bit of mix64(fnv1a64(token)) (+1 when 0).
 * Rows are scaled to unit Euclidean norm; rows without tokens stay zero.
 */
LabeledDataset hash_featurize(std::span<const RawRecord> records, std::size_t dim);

/// Featurised vector for one text, as used by hash_featurize.
std::vector<double> hash_features(std::string_view text, std::size_t dim);

struct SplitSpec {
    double train_fraction{0.8};
    bool stratified{true};
    std::uint64_t seed{0};

    void validate() const;
};

struct Split {
    LabeledDataset train;
    LabeledDataset validation;
    std::vector<std::string> warnings;
};

/// Seeded train/validation partition. Rows keep their original relative order.
/// Stratified splits take round(train_fraction · n_c) rows of each class,
/// keeping at least one row on each side when the class has two or more.
Split split_dataset(const LabeledDataset &ds, const SplitSpec &spec);

using Batches = std::vector<std::vector<std::size_t>>;

/// Shuffled row indices [0, n_rows) chunked into batches of `batch_size` (last may be short).
Batches make_batches(std::size_t n_rows, std::size_t batch_size, std::uint64_t shuffle_seed);

struct SplitBatches {
    Split split;
    Batches batches; // over split.train
};

SplitBatches split_and_batch(const LabeledDataset &ds, const SplitSpec &spec,
                             std::size_t batch_size, std::uint64_t shuffle_seed);

/// Writes `ds` as embedding-csv with class names as labels. Values use
/// 17 significant digits, so reading the file back is exact.
void write_embedding_csv(const LabeledDataset &ds, std::ostream &out);
void write_embedding_csv(const LabeledDataset &ds, const std::filesystem::path &path);

} // namespace qdressed
