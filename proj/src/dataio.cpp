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
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <iterator>
#include <map>
#include <sstream>

#include <json.hpp>

#include "csv.hpp"
#include "qdressed/dataio.hpp"
#include "qdressed/error.hpp"
#include "qdressed/hash.hpp"
#include "qdressed/rng.hpp"

namespace qdressed {

namespace {

std::string_view trim(std::string_view s) {
    const auto first = s.find_first_not_of(" \t\r\n");
    if (first == std::string_view::npos) {
        return {};
    }
    const auto last = s.find_last_not_of(" \t\r\n");
    return s.substr(first, last - first + 1);
}

std::string lower_ascii(std::string_view s) {
    std::string out(s);
    for (auto &c : out) {
        if (c >= 'A' && c <= 'Z') {
            c = static_cast<char>(c - 'A' + 'a');
        }
    }
    return out;
}

double parse_number(std::string_view text, std::size_t line, std::size_t column) {
    const auto t = trim(text);
    double value = 0.0;
    const auto *begin = t.data();
    const auto *end = t.data() + t.size();
    if (!t.empty() && *begin == '+') {
        ++begin;
    }
    const auto [ptr, ec] = std::from_chars(begin, end, value);
    if (t.empty() || ec != std::errc{} || ptr != end || !std::isfinite(value)) {
        throw ParseError(line, "feature " + std::to_string(column) + " is not a finite number: '" +
                                   std::string(t) + "'");
    }
    return value;
}

/// Builds a dataset from class-name labels and row-major features.
LabeledDataset assemble(const std::vector<std::string> &names, std::vector<double> values,
                        std::size_t dim) {
    auto enc = encode_labels(names);
    LabeledDataset ds{Matrix(names.size(), dim), std::move(enc.labels),
                      std::move(enc.class_names)};
    std::copy(values.begin(), values.end(), ds.features.values().begin());
    return ds;
}

LabeledDataset read_embedding_csv(std::istream &in) {
    detail::CsvReader reader(in);
    std::vector<std::string> fields;
    if (!reader.next(fields)) {
        throw ParseError(1, "embedding-csv: missing header");
    }
    if (fields.size() < 2 || trim(fields[0]) != "label") {
        throw ParseError(1, "embedding-csv header must be label,f0,...,f{d-1}");
    }
    const std::size_t dim = fields.size() - 1;
    for (std::size_t j = 0; j < dim; ++j) {
        if (trim(fields[j + 1]) != "f" + std::to_string(j)) {
            throw ParseError(1, "embedding-csv header column " + std::to_string(j + 1) +
                                    " must be f" + std::to_string(j));
        }
    }
    std::vector<std::string> names;
    std::vector<double> values;
    while (reader.next(fields)) {
        if (detail::is_blank_record(fields)) {
            continue;
        }
        const auto line = reader.record_line();
        if (fields.size() != dim + 1) {
            throw ParseError(line, "expected " + std::to_string(dim) + " features, got " +
                                       std::to_string(fields.size() - 1));
        }
        const auto label = trim(fields[0]);
        if (label.empty()) {
            throw ParseError(line, "missing label");
        }
        names.emplace_back(label);
        for (std::size_t j = 0; j < dim; ++j) {
            values.push_back(parse_number(fields[j + 1], line, j));
        }
    }
    return assemble(names, std::move(values), dim);
}

LabeledDataset read_jsonl(std::istream &in) {
    std::vector<std::string> names;
    std::vector<double> values;
    std::size_t dim = 0;
    std::string text;
    std::size_t line = 0;
    while (std::getline(in, text)) {
        ++line;
        if (trim(text).empty()) {
            continue;
        }
        nlohmann::json obj;
        try {
            obj = nlohmann::json::parse(text);
        } catch (const nlohmann::json::parse_error &e) {
            throw ParseError(line, std::string("invalid JSON: ") + e.what());
        }
        if (!obj.is_object() || !obj.contains("label") || !obj["label"].is_string() ||
            obj["label"].get<std::string>().empty()) {
            throw ParseError(line, "missing or non-string \"label\"");
        }
        if (!obj.contains("features") || !obj["features"].is_array() || obj["features"].empty()) {
            throw ParseError(line, "missing or empty \"features\" array");
        }
        const auto &feats = obj["features"];
        if (names.empty()) {
            dim = feats.size();
        } else if (feats.size() != dim) {
            throw ParseError(line, "expected " + std::to_string(dim) + " features, got " +
                                       std::to_string(feats.size()));
        }
        for (std::size_t j = 0; j < feats.size(); ++j) {
            if (!feats[j].is_number() || !std::isfinite(feats[j].get<double>())) {
                throw ParseError(line, "feature " + std::to_string(j) + " is not a finite number");
            }
            values.push_back(feats[j].get<double>());
        }
        names.push_back(obj["label"].get<std::string>());
    }
    return assemble(names, std::move(values), dim);
}

std::vector<RawRecord> read_raw_text_csv(std::istream &in) {
    detail::CsvReader reader(in);
    std::vector<std::string> fields;
    if (!reader.next(fields)) {
        throw ParseError(1, "raw-text-csv: missing header");
    }
    std::ptrdiff_t content_col = -1;
    std::ptrdiff_t sentiment_col = -1;
    for (std::size_t j = 0; j < fields.size(); ++j) {
        const auto name = lower_ascii(trim(fields[j]));
        if (name == "content") {
            content_col = static_cast<std::ptrdiff_t>(j);
        } else if (name == "sentiment") {
            sentiment_col = static_cast<std::ptrdiff_t>(j);
        }
    }
    if (content_col < 0 || sentiment_col < 0) {
        throw ParseError(1, "raw-text-csv header needs 'content' and 'sentiment' columns");
    }
    const auto needed = static_cast<std::size_t>(std::max(content_col, sentiment_col)) + 1;
    std::vector<RawRecord> records;
    while (reader.next(fields)) {
        if (detail::is_blank_record(fields)) {
            continue;
        }
        const auto line = reader.record_line();
        if (fields.size() < needed) {
            throw ParseError(line, "expected at least " + std::to_string(needed) + " columns");
        }
        RawRecord rec{std::string(trim(fields[static_cast<std::size_t>(content_col)])),
                      std::string(trim(fields[static_cast<std::size_t>(sentiment_col)]))};
        if (rec.content.empty()) {
            throw ParseError(line, "empty content");
        }
        if (rec.sentiment.empty()) {
            throw ParseError(line, "missing sentiment label");
        }
        records.push_back(std::move(rec));
    }
    return records;
}

DataFormat detect_from_header(std::string_view header) {
    const auto lower = lower_ascii(header);
    if (!trim(lower).empty() && trim(lower).front() == '{') {
        return DataFormat::jsonl;
    }
    if (lower.find("content") != std::string::npos && lower.find("sentiment") != std::string::npos) {
        return DataFormat::raw_text_csv;
    }
    return DataFormat::embedding_csv;
}

} // namespace

DataFormat parse_data_format(std::string_view name) {
    if (name == "auto") {
        return DataFormat::auto_detect;
    }
    if (name == "embedding-csv") {
        return DataFormat::embedding_csv;
    }
    if (name == "jsonl") {
        return DataFormat::jsonl;
    }
    if (name == "raw-text-csv") {
        return DataFormat::raw_text_csv;
    }
    throw ArgumentError("unknown data format '" + std::string(name) + "'");
}

std::string_view to_string(DataFormat format) {
    switch (format) {
    case DataFormat::auto_detect:
        return "auto";
    case DataFormat::embedding_csv:
        return "embedding-csv";
    case DataFormat::jsonl:
        return "jsonl";
    case DataFormat::raw_text_csv:
        return "raw-text-csv";
    }
    return "auto";
}

DataFormat detect_format(const std::filesystem::path &path) {
    const auto ext = lower_ascii(path.extension().string());
    if (ext == ".jsonl" || ext == ".json") {
        return DataFormat::jsonl;
    }
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw IoError("cannot open " + path.string());
    }
    std::string header;
    std::getline(in, header);
    return detect_from_header(header);
}

LoadedData load_dataset(std::istream &in, DataFormat format) {
    if (format == DataFormat::auto_detect) {
        const std::string text(std::istreambuf_iterator<char>(in), {});
        std::istringstream again(text);
        return load_dataset(again, detect_from_header(text.substr(0, text.find('\n'))));
    }
    switch (format) {
    case DataFormat::embedding_csv:
        return read_embedding_csv(in);
    case DataFormat::jsonl:
        return read_jsonl(in);
    case DataFormat::raw_text_csv:
        return read_raw_text_csv(in);
    case DataFormat::auto_detect:
        break;
    }
    throw ArgumentError("unresolved data format");
}

LoadedData load_dataset(const std::filesystem::path &path, DataFormat format) {
    if (format == DataFormat::auto_detect) {
        format = detect_format(path);
    }
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw IoError("cannot open " + path.string());
    }
    return load_dataset(in, format);
}

LabelEncoding encode_labels(std::span<const std::string> names) {
    LabelEncoding enc;
    enc.class_names.assign(names.begin(), names.end());
    std::sort(enc.class_names.begin(), enc.class_names.end());
    enc.class_names.erase(std::unique(enc.class_names.begin(), enc.class_names.end()),
                          enc.class_names.end());
    enc.labels.reserve(names.size());
    for (const auto &n : names) {
        const auto it = std::lower_bound(enc.class_names.begin(), enc.class_names.end(), n);
        enc.labels.push_back(static_cast<std::size_t>(it - enc.class_names.begin()));
    }
    return enc;
}

LabeledDataset remap_labels(const LabeledDataset &ds, std::span<const std::string> class_names) {
    std::map<std::string, std::size_t, std::less<>> index;
    for (std::size_t c = 0; c < class_names.size(); ++c) {
        index.emplace(class_names[c], c);
    }
    LabeledDataset out{ds.features, {}, {class_names.begin(), class_names.end()}};
    out.labels.reserve(ds.size());
    for (const auto label : ds.labels) {
        const auto &name = ds.class_names.at(label);
        const auto it = index.find(name);
        if (it == index.end()) {
            throw ArgumentError("class '" + name + "' is not known to the model");
        }
        out.labels.push_back(it->second);
    }
    return out;
}

std::vector<std::string> tokenize(std::string_view text) {
    std::vector<std::string> tokens;
    std::string current;
    for (const char ch : text) {
        const auto c = static_cast<unsigned char>(ch);
        const bool word = (c >= '0' && c <= '9') || (c >= 'a' && c <= 'z') ||
                          (c >= 'A' && c <= 'Z') || c >= 0x80;
        if (word) {
            current.push_back(c >= 'A' && c <= 'Z' ? static_cast<char>(c - 'A' + 'a') : ch);
        } else if (!current.empty()) {
            tokens.push_back(std::move(current));
            current.clear();
        }
    }
    if (!current.empty()) {
        tokens.push_back(std::move(current));
    }
    return tokens;
}

std::vector<double> hash_features(std::string_view text, std::size_t dim) {
    if (dim < 8) {
        throw ArgumentError("feature dimension must be at least 8, got " + std::to_string(dim));
    }
    std::vector<double> v(dim, 0.0);
    for (const auto &tok : tokenize(text)) {
        const std::uint64_t h = fnv1a64(tok);
        const double sign = (mix64(h) & 1U) ? -1.0 : 1.0;
        v[h % dim] += sign;
    }
    double norm = 0.0;
    for (const double x : v) {
        norm += x * x;
    }
    if (norm > 0.0) {
        norm = std::sqrt(norm);
        for (auto &x : v) {
            x /= norm;
        }
    }
    return v;
}

LabeledDataset hash_featurize(std::span<const RawRecord> records, std::size_t dim) {
    if (records.empty()) {
        throw ArgumentError("hash_featurize: no records");
    }
    if (dim < 8) {
        throw ArgumentError("feature dimension must be at least 8, got " + std::to_string(dim));
    }
    std::vector<std::string> names;
    names.reserve(records.size());
    for (const auto &r : records) {
        names.push_back(r.sentiment);
    }
    auto enc = encode_labels(names);
    LabeledDataset ds{Matrix(records.size(), dim), std::move(enc.labels),
                      std::move(enc.class_names)};
#pragma omp parallel for schedule(static)
    for (std::int64_t i = 0; i < static_cast<std::int64_t>(records.size()); ++i) {
        const auto idx = static_cast<std::size_t>(i);
        const auto v = hash_features(records[idx].content, dim);
        std::copy(v.begin(), v.end(), ds.features.row(idx).begin());
    }
    return ds;
}

void SplitSpec::validate() const {
    if (!(train_fraction > 0.0 && train_fraction < 1.0)) {
        throw ArgumentError("train_fraction must be in (0, 1)");
    }
}

Split split_dataset(const LabeledDataset &ds, const SplitSpec &spec) {
    spec.validate();
    ds.validate();
    if (ds.empty()) {
        throw ArgumentError("cannot split an empty dataset");
    }
    auto train_count = [&](std::size_t n) {
        auto k = static_cast<std::size_t>(std::floor(spec.train_fraction * static_cast<double>(n) + 0.5));
        if (n >= 2) {
            k = std::clamp<std::size_t>(k, 1, n - 1);
        } else {
            k = n;
        }
        return k;
    };

    Split split;
    std::vector<std::size_t> train_rows;
    std::vector<std::size_t> val_rows;
    if (spec.stratified) {
        std::vector<std::vector<std::size_t>> members(ds.n_classes());
        for (std::size_t i = 0; i < ds.size(); ++i) {
            members[ds.labels[i]].push_back(i);
        }
        for (std::size_t c = 0; c < members.size(); ++c) {
            auto &rows = members[c];
            if (rows.empty()) {
                continue;
            }
            Rng rng(derive_seed(spec.seed, {c}));
            rng.shuffle(rows);
            const std::size_t k = train_count(rows.size());
            train_rows.insert(train_rows.end(), rows.begin(), rows.begin() + static_cast<std::ptrdiff_t>(k));
            val_rows.insert(val_rows.end(), rows.begin() + static_cast<std::ptrdiff_t>(k), rows.end());
            if (k == rows.size()) {
                split.warnings.push_back("class '" + ds.class_names[c] +
                                         "' has a single sample; it appears only in the train split");
            }
        }
    } else {
        std::vector<std::size_t> rows(ds.size());
        for (std::size_t i = 0; i < rows.size(); ++i) {
            rows[i] = i;
        }
        Rng rng(derive_seed(spec.seed, {}));
        rng.shuffle(rows);
        const std::size_t k = train_count(rows.size());
        train_rows.assign(rows.begin(), rows.begin() + static_cast<std::ptrdiff_t>(k));
        val_rows.assign(rows.begin() + static_cast<std::ptrdiff_t>(k), rows.end());
    }
    std::sort(train_rows.begin(), train_rows.end());
    std::sort(val_rows.begin(), val_rows.end());
    split.train = ds.subset(train_rows);
    split.validation = ds.subset(val_rows);
    return split;
}

Batches make_batches(std::size_t n_rows, std::size_t batch_size, std::uint64_t shuffle_seed) {
    if (batch_size < 1) {
        throw ArgumentError("batch_size must be at least 1");
    }
    std::vector<std::size_t> order(n_rows);
    for (std::size_t i = 0; i < n_rows; ++i) {
        order[i] = i;
    }
    Rng rng(derive_seed(shuffle_seed, {0x6261}));
    rng.shuffle(order);
    Batches batches;
    for (std::size_t start = 0; start < n_rows; start += batch_size) {
        const std::size_t end = std::min(n_rows, start + batch_size);
        batches.emplace_back(order.begin() + static_cast<std::ptrdiff_t>(start),
                             order.begin() + static_cast<std::ptrdiff_t>(end));
    }
    return batches;
}

SplitBatches split_and_batch(const LabeledDataset &ds, const SplitSpec &spec,
                             std::size_t batch_size, std::uint64_t shuffle_seed) {
    if (batch_size < 1) {
        throw ArgumentError("batch_size must be at least 1");
    }
    SplitBatches out{split_dataset(ds, spec), {}};
    out.batches = make_batches(out.split.train.size(), batch_size, shuffle_seed);
    return out;
}

void write_embedding_csv(const LabeledDataset &ds, std::ostream &out) {
    out << "label";
    for (std::size_t j = 0; j < ds.dim(); ++j) {
        out << ",f" << j;
    }
    out << '\n';
    char buf[32];
    for (std::size_t i = 0; i < ds.size(); ++i) {
        const auto &name = ds.class_names.at(ds.labels[i]);
        if (name.find_first_of(",\"\n\r") != std::string::npos) {
            out << '"';
            for (const char c : name) {
                out << (c == '"' ? "\"\"" : std::string(1, c));
            }
            out << '"';
        } else {
            out << name;
        }
        for (const double v : ds.row(i)) {
            std::snprintf(buf, sizeof buf, "%.17g", v);
            out << ',' << buf;
        }
        out << '\n';
    }
}

void write_embedding_csv(const LabeledDataset &ds, const std::filesystem::path &path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) {
        throw IoError("cannot write " + path.string());
    }
    write_embedding_csv(ds, out);
    if (!out) {
        throw IoError("write failed for " + path.string());
    }
}

} // namespace qdressed
