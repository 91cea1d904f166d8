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

#include <fstream>
#include <iterator>
#include <sstream>

#include <json.hpp>

#include "qdressed/checkpoint.hpp"
#include "qdressed/error.hpp"

namespace qdressed {

namespace {

using nlohmann::ordered_json;

constexpr const char *kFormatName = "qdressed-checkpoint";

ordered_json matrix_to_json(const Matrix &m) {
    ordered_json rows = ordered_json::array();
    for (std::size_t r = 0; r < m.rows(); ++r) {
        const auto row = m.row(r);
        rows.push_back(std::vector<double>(row.begin(), row.end()));
    }
    return rows;
}

Matrix matrix_from_json(const ordered_json &j, std::size_t rows, std::size_t cols,
                        const std::string &what) {
    if (!j.is_array() || j.size() != rows) {
        throw ParseError(0, what + ": expected " + std::to_string(rows) + " rows");
    }
    Matrix m(rows, cols);
    for (std::size_t r = 0; r < rows; ++r) {
        const auto &row = j[r];
        if (!row.is_array() || row.size() != cols) {
            throw ParseError(0, what + ": row " + std::to_string(r) + " must have " +
                                    std::to_string(cols) + " entries");
        }
        for (std::size_t c = 0; c < cols; ++c) {
            if (!row[c].is_number()) {
                throw ParseError(0, what + ": non-numeric entry");
            }
            m(r, c) = row[c].get<double>();
        }
    }
    return m;
}

ordered_json linear_to_json(const LinearLayer &layer) {
    ordered_json j;
    j["in_dim"] = layer.in_dim();
    j["out_dim"] = layer.out_dim();
    j["weights"] = matrix_to_json(layer.weights);
    j["bias"] = layer.bias ? ordered_json(*layer.bias) : ordered_json(nullptr);
    return j;
}

LinearLayer linear_from_json(const ordered_json &j, const std::string &what) {
    const auto in = j.at("in_dim").get<std::size_t>();
    const auto out = j.at("out_dim").get<std::size_t>();
    LinearLayer layer{matrix_from_json(j.at("weights"), out, in, what + ".weights"), std::nullopt};
    if (!j.at("bias").is_null()) {
        auto bias = j.at("bias").get<std::vector<double>>();
        if (bias.size() != out) {
            throw ParseError(0, what + ".bias must have " + std::to_string(out) + " entries");
        }
        layer.bias = std::move(bias);
    }
    return layer;
}

ordered_json layer_to_json(const Layer &layer) {
    if (const auto *adapter = std::get_if<LoraAdapter>(&layer)) {
        ordered_json j;
        j["kind"] = "lora";
        j["base"] = linear_to_json(adapter->base);
        j["rank"] = adapter->rank;
        j["alpha"] = adapter->alpha;
        j["dropout"] = adapter->dropout_p;
        j["a"] = matrix_to_json(adapter->a);
        j["b"] = matrix_to_json(adapter->b);
        return j;
    }
    ordered_json j;
    j["kind"] = "linear";
    j["layer"] = linear_to_json(std::get<LinearLayer>(layer));
    return j;
}

Layer layer_from_json(const ordered_json &j, const std::string &what) {
    const auto kind = j.at("kind").get<std::string>();
    if (kind == "linear") {
        return linear_from_json(j.at("layer"), what);
    }
    if (kind != "lora") {
        throw ParseError(0, what + ": unknown layer kind '" + kind + "'");
    }
    LoraAdapter adapter;
    adapter.base = linear_from_json(j.at("base"), what + ".base");
    adapter.rank = j.at("rank").get<std::size_t>();
    adapter.alpha = j.at("alpha").get<double>();
    adapter.dropout_p = j.at("dropout").get<double>();
    adapter.a = matrix_from_json(j.at("a"), adapter.out_dim(), adapter.rank, what + ".a");
    adapter.b = matrix_from_json(j.at("b"), adapter.rank, adapter.in_dim(), what + ".b");
    return adapter;
}

} // namespace

std::string checkpoint_to_json(const Checkpoint &ckpt) {
    const auto shape = ckpt.model.shape();
    ordered_json j;
    j["format"] = kFormatName;
    j["version"] = kCheckpointVersion;
    j["seed"] = ckpt.seed;
    j["shape"] = {{"feature_dim", shape.feature_dim},
                  {"n_qubits", shape.n_qubits},
                  {"depth", shape.depth},
                  {"n_classes", shape.n_classes}};
    j["class_names"] = ckpt.class_names;
    j["pre_net"] = layer_to_json(ckpt.model.pre_net);
    j["qparams"] = matrix_to_json(ckpt.model.qparams.angles);
    j["post_net"] = layer_to_json(ckpt.model.post_net);
    return j.dump(1) + "\n";
}

Checkpoint checkpoint_from_json(const std::string &text) {
    ordered_json j;
    try {
        j = ordered_json::parse(text);
    } catch (const nlohmann::json::parse_error &e) {
        throw ParseError(0, std::string("checkpoint is not valid JSON: ") + e.what());
    }
    try {
        if (j.at("format").get<std::string>() != kFormatName) {
            throw ParseError(0, "not a qdressed checkpoint");
        }
        if (j.at("version").get<int>() != kCheckpointVersion) {
            throw ParseError(0, "unsupported checkpoint version " +
                                    std::to_string(j.at("version").get<int>()));
        }
        const auto &s = j.at("shape");
        const ModelShape shape{s.at("feature_dim").get<std::size_t>(),
                               s.at("n_qubits").get<std::size_t>(), s.at("depth").get<std::size_t>(),
                               s.at("n_classes").get<std::size_t>()};
        Checkpoint ckpt;
        ckpt.seed = j.at("seed").get<std::uint64_t>();
        ckpt.class_names = j.at("class_names").get<std::vector<std::string>>();
        ckpt.model.qconfig = QuantumLayerConfig{shape.n_qubits, shape.depth};
        ckpt.model.qconfig.validate();
        ckpt.model.pre_net = layer_from_json(j.at("pre_net"), "pre_net");
        ckpt.model.qparams.angles =
            matrix_from_json(j.at("qparams"), shape.depth, shape.n_qubits, "qparams");
        ckpt.model.post_net = layer_from_json(j.at("post_net"), "post_net");
        ckpt.model.validate();
        if (ckpt.model.shape().feature_dim != shape.feature_dim ||
            ckpt.model.n_classes() != shape.n_classes) {
            throw ParseError(0, "checkpoint shape block disagrees with its layers");
        }
        if (ckpt.class_names.size() != shape.n_classes) {
            throw ParseError(0, "checkpoint lists " + std::to_string(ckpt.class_names.size()) +
                                    " class names for " + std::to_string(shape.n_classes) +
                                    " classes");
        }
        return ckpt;
    } catch (const nlohmann::json::exception &e) {
        throw ParseError(0, std::string("malformed checkpoint: ") + e.what());
    } catch (const ShapeError &e) {
        throw ParseError(0, std::string("inconsistent checkpoint: ") + e.what());
    }
}

void save_checkpoint(const Checkpoint &ckpt, const std::filesystem::path &path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) {
        throw IoError("cannot write " + path.string());
    }
    out << checkpoint_to_json(ckpt);
    if (!out) {
        throw IoError("write failed for " + path.string());
    }
}

Checkpoint load_checkpoint(const std::filesystem::path &path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw IoError("cannot open checkpoint " + path.string());
    }
    const std::string text(std::istreambuf_iterator<char>(in), {});
    return checkpoint_from_json(text);
}

} // namespace qdressed
