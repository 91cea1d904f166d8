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

#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iterator>
#include <optional>
#include <ostream>
#include <sstream>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "qdressed/checkpoint.hpp"
#include "qdressed/cli.hpp"
#include "qdressed/dataio.hpp"
#include "qdressed/error.hpp"
#include "qdressed/hash.hpp"
#include "qdressed/smote.hpp"
#include "qdressed/trainer.hpp"

namespace qdressed::cli {

namespace {

namespace fs = std::filesystem;
using nlohmann::ordered_json;
using Clock = std::chrono::steady_clock;

struct TrainOptions {
    std::string data;
    std::string format{"auto"};
    std::size_t feature_dim{768};
    std::size_t n_qubits{4};
    std::size_t depth{4};
    std::size_t epochs{10};
    std::optional<double> lr;
    std::string optimizer{"sgd"};
    std::size_t batch_size{1};
    std::uint64_t seed{0};
    bool smote{true};
    std::size_t smote_k{5};
    bool lora{true};
    std::size_t lora_r{8};
    double lora_alpha{16.0};
    double lora_dropout{0.6};
    double train_fraction{0.8};
    bool stratified{true};
};

ordered_json options_to_json(const TrainOptions &o, DataFormat resolved_format, double lr) {
    return ordered_json{{"data", o.data},
                        {"format", std::string(to_string(resolved_format))},
                        {"feature_dim", o.feature_dim},
                        {"n_qubits", o.n_qubits},
                        {"depth", o.depth},
                        {"epochs", o.epochs},
                        {"learning_rate", lr},
                        {"optimizer", o.optimizer},
                        {"batch_size", o.batch_size},
                        {"seed", o.seed},
                        {"smote", o.smote},
                        {"smote_k", o.smote_k},
                        {"lora", o.lora},
                        {"lora_r", o.lora_r},
                        {"lora_alpha", o.lora_alpha},
                        {"lora_dropout", o.lora_dropout},
                        {"train_fraction", o.train_fraction},
                        {"stratified", o.stratified}};
}

TrainOptions options_from_json(const ordered_json &j) {
    TrainOptions o;
    o.data = j.at("data").get<std::string>();
    o.format = j.at("format").get<std::string>();
    o.feature_dim = j.at("feature_dim").get<std::size_t>();
    o.n_qubits = j.at("n_qubits").get<std::size_t>();
    o.depth = j.at("depth").get<std::size_t>();
    o.epochs = j.at("epochs").get<std::size_t>();
    o.lr = j.at("learning_rate").get<double>();
    o.optimizer = j.at("optimizer").get<std::string>();
    o.batch_size = j.at("batch_size").get<std::size_t>();
    o.seed = j.at("seed").get<std::uint64_t>();
    o.smote = j.at("smote").get<bool>();
    o.smote_k = j.at("smote_k").get<std::size_t>();
    o.lora = j.at("lora").get<bool>();
    o.lora_r = j.at("lora_r").get<std::size_t>();
    o.lora_alpha = j.at("lora_alpha").get<double>();
    o.lora_dropout = j.at("lora_dropout").get<double>();
    o.train_fraction = j.at("train_fraction").get<double>();
    o.stratified = j.at("stratified").get<bool>();
    return o;
}

/// Parses `args` with `app`; returns an exit code when the caller should stop.
std::optional<int> parse(CLI::App &app, const std::string &prog,
                         std::span<const std::string> args, std::ostream &out,
                         std::ostream &err) {
    std::vector<const char *> argv{prog.c_str()};
    for (const auto &a : args) {
        argv.push_back(a.c_str());
    }
    try {
        app.parse(static_cast<int>(argv.size()), argv.data());
    } catch (const CLI::CallForHelp &) {
        out << app.help();
        return kExitOk;
    } catch (const CLI::ParseError &e) {
        err << prog << ": " << e.what() << "\n";
        return kExitUsage;
    }
    return std::nullopt;
}

LabeledDataset load_features(const fs::path &path, DataFormat format, std::size_t feature_dim) {
    auto loaded = load_dataset(path, format);
    if (auto *records = std::get_if<std::vector<RawRecord>>(&loaded)) {
        return hash_featurize(*records, feature_dim);
    }
    return std::get<LabeledDataset>(std::move(loaded));
}

void write_text(const fs::path &path, const std::string &text) {
    std::ofstream f(path, std::ios::binary);
    if (!f) {
        throw IoError("cannot write " + path.string());
    }
    f << text;
    if (!f) {
        throw IoError("write failed for " + path.string());
    }
}

std::string format_metrics(const MetricsRecord &r) {
    char buf[160];
    std::snprintf(buf, sizeof buf, "acc=%.4f loss=%.4f mae=%.4f", r.accuracy, r.loss, r.mae);
    return buf;
}

double ms_since(Clock::time_point t0) {
    return std::chrono::duration<double, std::milli>(Clock::now() - t0).count();
}

int run_train(TrainOptions o, const fs::path &out_dir, std::ostream &out, std::ostream &err,
              std::optional<std::string> expected_digest) {
    const auto t_start = Clock::now();
    const auto opt_kind = parse_optimizer(o.optimizer);
    const double lr = o.lr.value_or(default_learning_rate(opt_kind));
    DataFormat format = parse_data_format(o.format);
    if (format == DataFormat::auto_detect) {
        format = detect_format(o.data);
    }

    const auto digest = hex64(file_digest(o.data));
    if (expected_digest && *expected_digest != digest) {
        throw ArgumentError("input " + o.data + " has digest " + digest + ", manifest records " +
                            *expected_digest);
    }

    auto t0 = Clock::now();
    const auto dataset = load_features(o.data, format, o.feature_dim);
    const double load_ms = ms_since(t0);
    if (dataset.empty()) {
        throw ArgumentError("dataset " + o.data + " has no rows");
    }

    auto split = split_dataset(dataset, SplitSpec{o.train_fraction, o.stratified, o.seed});
    for (const auto &w : split.warnings) {
        err << "warning: " << w << "\n";
    }
    const std::size_t original_train = split.train.size();
    if (o.smote) {
        split.train = smote_balance(split.train, SmoteConfig{o.smote_k, derive_seed(o.seed, {0x736d})});
    }
    const auto batches = make_batches(split.train.size(), o.batch_size, o.seed);

    auto model = make_model({dataset.dim(), o.n_qubits, o.depth, dataset.n_classes()}, o.seed);
    if (o.lora) {
        attach_lora(model, LoraSettings{o.lora_r, o.lora_alpha, o.lora_dropout}, o.seed);
    }

    TrainConfig cfg;
    cfg.epochs = o.epochs;
    cfg.learning_rate = lr;
    cfg.optimizer = opt_kind;
    cfg.seed = o.seed;
    cfg.use_lora = o.lora;
    cfg.use_smote = o.smote;

    fs::create_directories(out_dir);
    t0 = Clock::now();
    const auto result = fit(std::move(model), split.train, batches, split.validation, cfg,
                            [&](const MetricsRecord &tr, const MetricsRecord &va) {
                                out << "epoch " << tr.epoch << "/" << o.epochs << "  train "
                                    << format_metrics(tr) << "  val " << format_metrics(va)
                                    << "\n";
                            });
    const double fit_ms = ms_since(t0);

    {
        std::ostringstream csv;
        write_metrics_csv(result.history, csv);
        write_text(out_dir / "metrics.csv", csv.str());
    }
    const std::vector<std::pair<std::string, ConfusionMatrix>> matrices{
        {"train", result.train_confusion}, {"validation", result.validation_confusion}};
    write_text(out_dir / "confusion.json", confusion_json(dataset.class_names, matrices));
    save_checkpoint({result.model, dataset.class_names, o.seed}, out_dir / "checkpoint.json");
    write_embedding_csv(split.train, out_dir / "train_split.csv");
    write_embedding_csv(split.validation, out_dir / "validation_split.csv");

    o.format = std::string(to_string(format));
    ordered_json manifest;
    manifest["tool"] = "qdressed";
    manifest["manifest_version"] = 1;
    manifest["command"] = "train";
    manifest["config"] = options_to_json(o, format, lr);
    manifest["inputs"] = ordered_json::array({{{"path", o.data}, {"fnv1a64", digest}}});
    manifest["seed"] = o.seed;
    manifest["dataset"] = {{"rows", dataset.size()},
                           {"feature_dim", dataset.dim()},
                           {"class_names", dataset.class_names},
                           {"train_rows", original_train},
                           {"synthetic_rows", split.train.size() - original_train},
                           {"validation_rows", split.validation.size()}};
    manifest["artifacts"] = {{"metrics", "metrics.csv"},
                             {"confusion", "confusion.json"},
                             {"checkpoint", "checkpoint.json"},
                             {"train_split", "train_split.csv"},
                             {"validation_split", "validation_split.csv"}};
    manifest["timings_ms"] = {{"load", load_ms}, {"fit", fit_ms}, {"total", ms_since(t_start)}};
    write_text(out_dir / "manifest.json", manifest.dump(2) + "\n");

    out << "wrote " << (out_dir / "metrics.csv").string() << "\n";
    return kExitOk;
}

/// Maps library exceptions to the exit-code contract.
template <class Fn> int guarded(std::ostream &err, const char *cmd, Fn fn) {
    try {
        return fn();
    } catch (const DivergenceError &e) {
        err << cmd << ": diverged: " << e.what() << "\n";
        return kExitDivergence;
    } catch (const std::exception &e) {
        err << cmd << ": error: " << e.what() << "\n";
        return kExitDataError;
    }
}

} // namespace

int cmd_train(std::span<const std::string> args, std::ostream &out, std::ostream &err) {
    TrainOptions o;
    std::string out_dir;
    std::string manifest_path;
    double lr = 0.0;

    CLI::App app{"Train a dressed quantum classifier", "qdressed train"};
    app.add_option("--data", o.data, "Dataset file")->check(CLI::ExistingFile);
    app.add_option("--format", o.format, "auto | embedding-csv | jsonl | raw-text-csv")
        ->check(CLI::IsMember({"auto", "embedding-csv", "jsonl", "raw-text-csv"}))
        ->capture_default_str();
    app.add_option("--feature-dim", o.feature_dim, "Hashed feature width for raw text")
        ->check(CLI::Range(std::size_t{8}, std::size_t{1} << 20))
        ->capture_default_str();
    app.add_option("--n-qubits", o.n_qubits, "Circuit width")
        ->check(CLI::Range(std::size_t{1}, kMaxQubits))
        ->capture_default_str();
    app.add_option("--depth", o.depth, "Entangling blocks")
        ->check(CLI::Range(std::size_t{0}, kMaxDepth))
        ->capture_default_str();
    app.add_option("--epochs", o.epochs, "Training epochs")
        ->check(CLI::PositiveNumber)
        ->capture_default_str();
    auto *lr_opt = app.add_option("--lr", lr, "Learning rate (default 0.05 sgd, 0.001 adam)")
                       ->check(CLI::NonNegativeNumber);
    app.add_option("--optimizer", o.optimizer, "sgd | adam")
        ->check(CLI::IsMember({"sgd", "adam"}))
        ->capture_default_str();
    app.add_option("--batch-size", o.batch_size, "Samples per update")
        ->check(CLI::PositiveNumber)
        ->capture_default_str();
    app.add_option("--seed", o.seed, "Seed for every random draw")->capture_default_str();
    app.add_flag("--smote,!--no-smote", o.smote, "Balance the train split with SMOTE");
    app.add_option("--smote-k", o.smote_k, "SMOTE neighbours")
        ->check(CLI::PositiveNumber)
        ->capture_default_str();
    app.add_flag("--lora,!--no-lora", o.lora, "Wrap classical layers in LoRA adapters");
    app.add_option("--lora-r", o.lora_r, "LoRA rank")->check(CLI::PositiveNumber)->capture_default_str();
    app.add_option("--lora-alpha", o.lora_alpha, "LoRA scaling numerator")
        ->check(CLI::PositiveNumber)
        ->capture_default_str();
    app.add_option("--lora-dropout", o.lora_dropout, "LoRA input dropout in [0, 1)")
        ->check(CLI::Range(0.0, 0.999999))
        ->capture_default_str();
    app.add_option("--train-fraction", o.train_fraction, "Train share of the split")
        ->check(CLI::Range(1e-9, 1.0 - 1e-9))
        ->capture_default_str();
    app.add_flag("--stratified,!--no-stratified", o.stratified, "Stratify the split by class");
    app.add_option("--manifest", manifest_path, "Replay the configuration of a run manifest")
        ->check(CLI::ExistingFile);
    app.add_option("--out", out_dir, "Output directory")->required();

    if (auto code = parse(app, "qdressed train", args, out, err)) {
        return *code;
    }
    if (lr_opt->count() > 0) {
        o.lr = lr;
    }
    if (manifest_path.empty() && o.data.empty()) {
        err << "qdressed train: --data or --manifest is required\n";
        return kExitUsage;
    }

    return guarded(err, "train", [&] {
        std::optional<std::string> digest;
        if (!manifest_path.empty()) {
            std::ifstream in(manifest_path, std::ios::binary);
            const auto m = ordered_json::parse(std::string(std::istreambuf_iterator<char>(in), {}));
            const auto data_override = o.data;
            o = options_from_json(m.at("config"));
            if (!data_override.empty()) {
                o.data = data_override;
            }
            digest = m.at("inputs").at(0).at("fnv1a64").get<std::string>();
        }
        return run_train(o, out_dir, out, err, digest);
    });
}

int cmd_eval(std::span<const std::string> args, std::ostream &out, std::ostream &err) {
    std::string checkpoint_path;
    std::string data;
    std::string format{"auto"};
    std::string out_path{"eval_confusion.json"};

    CLI::App app{"Evaluate a checkpoint on a dataset", "qdressed eval"};
    app.add_option("--checkpoint", checkpoint_path, "Checkpoint written by train")->required();
    app.add_option("--data", data, "Dataset file")->required();
    app.add_option("--format", format, "auto | embedding-csv | jsonl | raw-text-csv")
        ->check(CLI::IsMember({"auto", "embedding-csv", "jsonl", "raw-text-csv"}))
        ->capture_default_str();
    app.add_option("--out", out_path, "Confusion matrix JSON")->capture_default_str();

    if (auto code = parse(app, "qdressed eval", args, out, err)) {
        return *code;
    }

    return guarded(err, "eval", [&] {
        const auto ckpt = load_checkpoint(checkpoint_path);
        const auto shape = ckpt.model.shape();
        auto ds = load_features(data, parse_data_format(format), shape.feature_dim);
        if (ds.dim() != shape.feature_dim) {
            throw ShapeError("data chain d=" + std::to_string(ds.dim()) + " -> classes " +
                             std::to_string(ds.n_classes()) + " does not fit model chain " +
                             std::to_string(shape.feature_dim) + " -> " +
                             std::to_string(shape.n_qubits) + " qubits -> " +
                             std::to_string(shape.n_classes) + " classes");
        }
        ds = remap_labels(ds, ckpt.class_names);
        const auto r = evaluate(ckpt.model, ds);

        char buf[160];
        std::snprintf(buf, sizeof buf, "accuracy=%.17g loss=%.17g mae=%.17g\n", r.accuracy,
                      r.loss, r.mae);
        out << buf;
        const std::vector<std::pair<std::string, ConfusionMatrix>> matrices{
            {"evaluation", r.confusion}};
        write_text(out_path, confusion_json(ckpt.class_names, matrices));
        return kExitOk;
    });
}

int run(std::span<const std::string> args, std::ostream &out, std::ostream &err) {
    static constexpr const char *kUsage =
        "usage: qdressed <train|eval> [options]\n"
        "       qdressed <train|eval> --help\n";
    if (args.size() < 2) {
        err << kUsage;
        return kExitUsage;
    }
    const auto &sub = args[1];
    const auto rest = args.subspan(2);
    if (sub == "train") {
        return cmd_train(rest, out, err);
    }
    if (sub == "eval") {
        return cmd_eval(rest, out, err);
    }
    if (sub == "--help" || sub == "-h") {
        out << kUsage;
        return kExitOk;
    }
    err << "qdressed: unknown command '" << sub << "'\n" << kUsage;
    return kExitUsage;
}

} // namespace qdressed::cli
