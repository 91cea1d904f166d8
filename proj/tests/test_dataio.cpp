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
#include <cmath>
#include <filesystem>
#include <fstream>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include <gtest/gtest.h>

#include "oracles/numeric.hpp"
#include "qdressed/error.hpp"
#include "qdressed/dataio.hpp"
#include "qdressed/hash.hpp"
#include "qdressed/smote.hpp"

using namespace qdressed;

namespace {

LoadedData parse(const std::string &text, DataFormat format) {
    std::istringstream in(text);
    return load_dataset(in, format);
}

std::size_t parse_error_line(const std::string &text, DataFormat format) {
    try {
        parse(text, format);
    } catch (const ParseError &e) {
        return e.line();
    }
    return 0;
}

// Feature 0 carries the row index so membership can be checked after a split.
LabeledDataset indexed_dataset(const std::vector<std::size_t> &per_class) {
    LabeledDataset ds;
    std::size_t n = 0;
    for (auto c : per_class) {
        n += c;
    }
    ds.features = Matrix(n, 2);
    std::size_t r = 0;
    for (std::size_t c = 0; c < per_class.size(); ++c) {
        ds.class_names.push_back("c" + std::to_string(c));
        for (std::size_t i = 0; i < per_class[c]; ++i, ++r) {
            ds.features(r, 0) = static_cast<double>(r);
            ds.labels.push_back(c);
        }
    }
    return ds;
}

std::set<double> row_ids(const LabeledDataset &ds) {
    std::set<double> ids;
    for (std::size_t r = 0; r < ds.size(); ++r) {
        ids.insert(ds.features(r, 0));
    }
    return ids;
}

} // namespace

TEST(EmbeddingCsv, WellFormed) {
    const auto data = parse("label,f0,f1,f2,f3\nlove,1,2,3,4\nworry,0.5,-1,1e-3,0\n",
                            DataFormat::embedding_csv);
    const auto &ds = std::get<LabeledDataset>(data);
    EXPECT_EQ(ds.size(), 2U);
    EXPECT_EQ(ds.dim(), 4U);
    EXPECT_EQ(ds.class_names, (std::vector<std::string>{"love", "worry"}));
    EXPECT_EQ(ds.labels, (std::vector<std::size_t>{0, 1}));
    EXPECT_EQ(ds.features(1, 2), 1e-3);
}

TEST(EmbeddingCsv, ShortRowCitesLine) {
    EXPECT_EQ(parse_error_line("label,f0,f1,f2,f3\nlove,1,2,3,4\nworry,1,2,3\n",
                               DataFormat::embedding_csv),
              3U);
}

TEST(EmbeddingCsv, BadValuesCiteLine) {
    EXPECT_EQ(parse_error_line("label,f0,f1\na,1,2\nb,1,x\n", DataFormat::embedding_csv), 3U);
    EXPECT_EQ(parse_error_line("label,f0,f1\na,1,2\n,1,2\n", DataFormat::embedding_csv), 3U);
    EXPECT_EQ(parse_error_line("label,f0,f1\na,nan,2\n", DataFormat::embedding_csv), 2U);
    EXPECT_EQ(parse_error_line("label,g0,f1\na,1,2\n", DataFormat::embedding_csv), 1U);
}

TEST(EmbeddingCsv, QuotedLabelAndCrLf) {
    const auto data = parse("label,f0\r\n\"sad, very\",1\r\n", DataFormat::embedding_csv);
    EXPECT_EQ(std::get<LabeledDataset>(data).class_names[0], "sad, very");
}

TEST(Jsonl, WellFormed) {
    const auto data = parse("{\"label\":\"b\",\"features\":[1,2]}\n\n"
                            "{\"label\":\"a\",\"features\":[3,4.5]}\n",
                            DataFormat::jsonl);
    const auto &ds = std::get<LabeledDataset>(data);
    EXPECT_EQ(ds.size(), 2U);
    EXPECT_EQ(ds.labels, (std::vector<std::size_t>{1, 0}));
    EXPECT_EQ(ds.features(1, 1), 4.5);
}

TEST(Jsonl, ErrorsCiteLine) {
    EXPECT_EQ(parse_error_line("{\"label\":\"a\",\"features\":[1,2]}\n"
                               "{\"label\":\"a\",\"features\":[1]}\n",
                               DataFormat::jsonl),
              2U);
    EXPECT_EQ(parse_error_line("{\"features\":[1,2]}\n", DataFormat::jsonl), 1U);
    EXPECT_EQ(parse_error_line("{\"label\":\"a\",\"features\":[1,2]}\n{oops\n",
                               DataFormat::jsonl),
              2U);
}

TEST(RawText, TweetIdIgnored) {
    const auto data = parse("tweet_id,sentiment,content\n"
                            "1956967341,empty,@xoshayzers i know  i was listenin to bad habit\n"
                            "1956967666,sadness,\"Layin n bed with a headache, ughhhh\"\n",
                            DataFormat::raw_text_csv);
    const auto &recs = std::get<std::vector<RawRecord>>(data);
    ASSERT_EQ(recs.size(), 2U);
    EXPECT_EQ(recs[0].sentiment, "empty");
    EXPECT_EQ(recs[1].content, "Layin n bed with a headache, ughhhh");
    EXPECT_EQ(recs[0].content.find("1956967341"), std::string::npos);
}

TEST(RawText, MissingFieldsCiteLine) {
    EXPECT_EQ(parse_error_line("tweet_id,content,sentiment\n1,hello,love\n2,,love\n",
                               DataFormat::raw_text_csv),
              3U);
    EXPECT_EQ(parse_error_line("tweet_id,content,sentiment\n1,hello,\n", DataFormat::raw_text_csv),
              2U);
}

TEST(Format, Detection) {
    EXPECT_TRUE(std::holds_alternative<std::vector<RawRecord>>(
        parse("tweet_id,content,sentiment\n1,x,y\n", DataFormat::auto_detect)));
    EXPECT_TRUE(std::holds_alternative<LabeledDataset>(
        parse("{\"label\":\"a\",\"features\":[1]}\n", DataFormat::auto_detect)));
    EXPECT_TRUE(std::holds_alternative<LabeledDataset>(
        parse("label,f0\na,1\n", DataFormat::auto_detect)));
    EXPECT_EQ(parse_data_format("jsonl"), DataFormat::jsonl);
    EXPECT_THROW(parse_data_format("parquet"), ArgumentError);
}

TEST(Format, MissingFileIsIoError) {
    EXPECT_THROW(load_dataset("/nonexistent/qdressed.csv", DataFormat::embedding_csv), IoError);
}

TEST(Format, EmbeddingCsvRoundTrip) {
    Rng rng(1);
    auto ds = oracle::gaussian_blobs(3, 4, 5, 2.0, 0.7, 2);
    std::ostringstream out;
    write_embedding_csv(ds, out);
    const auto back = std::get<LabeledDataset>(parse(out.str(), DataFormat::embedding_csv));
    EXPECT_EQ(back, ds);
}

TEST(Labels, SortedUnique) {
    const std::vector<std::string> names{"worry", "empty", "love"};
    const auto enc = encode_labels(names);
    EXPECT_EQ(enc.class_names, (std::vector<std::string>{"empty", "love", "worry"}));
    EXPECT_EQ(enc.labels, (std::vector<std::size_t>{2, 0, 1}));
}

TEST(Labels, SingleRepeatedName) {
    const std::vector<std::string> names(4, "neutral");
    const auto enc = encode_labels(names);
    EXPECT_EQ(enc.class_names.size(), 1U);
    EXPECT_EQ(enc.labels, std::vector<std::size_t>(4, 0));
}

TEST(Labels, SevenEmotionCategories) {
    const std::vector<std::string> names{"worry",   "surprise", "sadness", "neutral",
                                         "love",    "enthusiasm", "empty"};
    const auto enc = encode_labels(names);
    EXPECT_EQ(enc.class_names,
              (std::vector<std::string>{"empty", "enthusiasm", "love", "neutral", "sadness",
                                        "surprise", "worry"}));
    EXPECT_EQ(enc.labels, (std::vector<std::size_t>{6, 5, 4, 3, 2, 1, 0}));
}

TEST(Labels, StableUnderPermutation) {
    Rng rng(3);
    std::vector<std::string> names{"a", "c", "b", "a", "d", "c", "b"};
    const auto first = encode_labels(names).class_names;
    for (int i = 0; i < 20; ++i) {
        rng.shuffle(names);
        const auto enc = encode_labels(names);
        EXPECT_EQ(enc.class_names, first);
        for (std::size_t j = 0; j < names.size(); ++j) {
            EXPECT_EQ(enc.class_names[enc.labels[j]], names[j]);
        }
    }
}

TEST(Labels, RemapRejectsUnknownClass) {
    auto ds = indexed_dataset({1, 1});
    const std::vector<std::string> known{"c1", "c0"};
    const auto remapped = remap_labels(ds, known);
    EXPECT_EQ(remapped.labels, (std::vector<std::size_t>{1, 0}));
    const std::vector<std::string> partial{"c0"};
    EXPECT_THROW(remap_labels(ds, partial), ArgumentError);
}

TEST(Featurize, Tokenize) {
    EXPECT_EQ(tokenize("Hello, WORLD!! it's 2day"),
              (std::vector<std::string>{"hello", "world", "it", "s", "2day"}));
    EXPECT_TRUE(tokenize("  ,.;  ").empty());
}

TEST(Featurize, DeterministicUnitNorm) {
    const auto a = hash_features("I love this so much", 768);
    EXPECT_EQ(a, hash_features("I love this so much", 768));
    double norm = 0.0;
    for (double v : a) {
        norm += v * v;
    }
    EXPECT_NEAR(std::sqrt(norm), 1.0, 1e-12);
}

TEST(Featurize, OrderInvariant) {
    EXPECT_EQ(hash_features("a b", 32), hash_features("b a", 32));
    EXPECT_EQ(hash_features("A B", 32), hash_features("b a", 32));
}

TEST(Featurize, EmptyTextStaysZero) {
    EXPECT_EQ(hash_features("!!!", 16), std::vector<double>(16, 0.0));
}

TEST(Featurize, FixedHashConstants) {
    EXPECT_EQ(fnv1a64(""), 0xcbf29ce484222325ULL);
    EXPECT_EQ(fnv1a64("a"), 0xaf63dc4c8601ec8cULL);
    EXPECT_EQ(fnv1a64("foobar"), 0x85944171f73967e8ULL);
    // single token: one bucket at ±1
    const auto v = hash_features("foobar", 8);
    const auto bucket = 0x85944171f73967e8ULL % 8;
    const double sign = (mix64(0x85944171f73967e8ULL) & 1U) ? -1.0 : 1.0;
    for (std::size_t i = 0; i < 8; ++i) {
        EXPECT_EQ(v[i], i == bucket ? sign : 0.0);
    }
}

TEST(Featurize, DatasetFromRecords) {
    const std::vector<RawRecord> recs{{"so sad today", "sadness"}, {"love it", "love"}};
    const auto ds = hash_featurize(recs, 64);
    EXPECT_EQ(ds.dim(), 64U);
    EXPECT_EQ(ds.class_names, (std::vector<std::string>{"love", "sadness"}));
    EXPECT_EQ(ds.labels, (std::vector<std::size_t>{1, 0}));
    EXPECT_THROW(hash_featurize(recs, 7), ArgumentError);
}

TEST(Split, CountArithmetic) {
    const auto ds = indexed_dataset({10});
    const auto split = split_dataset(ds, {0.8, false, 1});
    EXPECT_EQ(split.train.size(), 8U);
    EXPECT_EQ(split.validation.size(), 2U);
    const auto strat = split_dataset(indexed_dataset({5, 5}), {0.8, true, 1});
    EXPECT_EQ(strat.train.size(), 8U);
    EXPECT_EQ(strat.validation.size(), 2U);
}

TEST(Split, PartitionAndStratification) {
    Rng rng(5);
    for (int trial = 0; trial < 50; ++trial) {
        std::vector<std::size_t> per_class(1 + rng.index(5));
        for (auto &c : per_class) {
            c = 2 + rng.index(30);
        }
        const auto ds = indexed_dataset(per_class);
        const SplitSpec spec{rng.uniform(0.1, 0.9), true, rng.next_u64()};
        const auto split = split_dataset(ds, spec);
        auto train = row_ids(split.train);
        const auto val = row_ids(split.validation);
        EXPECT_EQ(train.size() + val.size(), ds.size());
        for (double id : val) {
            EXPECT_EQ(train.count(id), 0U);
            train.insert(id);
        }
        EXPECT_EQ(train, row_ids(ds));
        const auto counts = class_counts(split.train);
        for (std::size_t c = 0; c < per_class.size(); ++c) {
            const double ideal = spec.train_fraction * static_cast<double>(per_class[c]);
            EXPECT_LE(std::fabs(static_cast<double>(counts[c]) - ideal), 1.0);
        }
        EXPECT_TRUE(split.warnings.empty());
    }
}

TEST(Split, WarnsWhenClassCannotCoverBothSplits) {
    const auto split = split_dataset(indexed_dataset({6, 1}), {0.8, true, 3});
    EXPECT_FALSE(split.warnings.empty());
    EXPECT_EQ(split.train.size() + split.validation.size(), 7U);
}

TEST(Split, Deterministic) {
    const auto ds = indexed_dataset({7, 9, 4});
    const auto a = split_and_batch(ds, {0.7, true, 11}, 3, 12);
    const auto b = split_and_batch(ds, {0.7, true, 11}, 3, 12);
    EXPECT_EQ(a.split.train, b.split.train);
    EXPECT_EQ(a.split.validation, b.split.validation);
    EXPECT_EQ(a.batches, b.batches);
    EXPECT_NE(split_dataset(ds, {0.7, true, 11}).train, split_dataset(ds, {0.7, true, 99}).train);
}

TEST(Split, RejectsBadFraction) {
    EXPECT_THROW((SplitSpec{0.0, true, 0}.validate()), ArgumentError);
    EXPECT_THROW((SplitSpec{1.0, true, 0}.validate()), ArgumentError);
}

TEST(Batches, UnitBatchCountEqualsRows) {
    EXPECT_EQ(make_batches(13, 1, 0).size(), 13U);
}

TEST(Batches, PartitionTrainRows) {
    Rng rng(7);
    for (int trial = 0; trial < 30; ++trial) {
        const auto n = 1 + rng.index(60);
        const auto bs = 1 + rng.index(10);
        const auto batches = make_batches(n, bs, rng.next_u64());
        std::vector<std::size_t> all;
        for (const auto &b : batches) {
            EXPECT_GE(b.size(), 1U);
            EXPECT_LE(b.size(), bs);
            all.insert(all.end(), b.begin(), b.end());
        }
        std::sort(all.begin(), all.end());
        std::vector<std::size_t> expected(n);
        std::iota(expected.begin(), expected.end(), 0);
        EXPECT_EQ(all, expected);
    }
}

TEST(Batches, RejectsZeroBatchSize) { EXPECT_THROW(make_batches(5, 0, 0), ArgumentError); }
