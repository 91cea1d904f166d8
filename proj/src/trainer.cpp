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
#include <cstdio>
#include <ostream>

#include <json.hpp>

#include "qdressed/error.hpp"
#include "qdressed/rng.hpp"
#include "qdressed/trainer.hpp"

namespace qdressed {

namespace {

void check_pair(std::span<const std::size_t> preds, std::span<const std::size_t> labels,
                const char *what) {
    if (preds.size() != labels.size()) {
        throw ArgumentError(std::string(what) + ": " + std::to_string(preds.size()) +
                            " predictions vs " + std::to_string(labels.size()) + " labels");
    }
    if (preds.empty()) {
        throw ArgumentError(std::string(what) + ": empty input");
    }
}

std::size_t argmax(std::span<const double> v) {
    return static_cast<std::size_t>(std::max_element(v.begin(), v.end()) - v.begin());
}

void check_data_fits(const DressedModel &model, const LabeledDataset &ds, const char *which) {
    ds.validate();
    if (ds.dim() != model.feature_dim() && !ds.empty()) {
        throw ShapeError(std::string(which) + " data has " + std::to_string(ds.dim()) +
                         " features, model expects " + std::to_string(model.feature_dim()));
    }
    if (ds.n_classes() > model.n_classes()) {
        throw ShapeError(std::string(which) + " data has " + std::to_string(ds.n_classes()) +
                         " classes, model outputs " + std::to_string(model.n_classes()));
    }
}

bool all_finite(std::span<const double> v) {
    return std::all_of(v.begin(), v.end(), [](double x) { return std::isfinite(x); });
}

} // namespace

OptimizerKind parse_optimizer(std::string_view name) {
    if (name == "sgd") {
        return OptimizerKind::sgd;
    }
    if (name == "adam") {
        return OptimizerKind::adam;
    }
    throw ArgumentError("unknown optimizer '" + std::string(name) + "'");
}

std::string_view to_string(OptimizerKind kind) {
    return kind == OptimizerKind::sgd ? "sgd" : "adam";
}

double default_learning_rate(OptimizerKind kind) {
    return kind == OptimizerKind::sgd ? 0.05 : 0.001;
}

void TrainConfig::validate() const {
    if (epochs < 1) {
        throw ArgumentError("epochs must be at least 1");
    }
    if (!(learning_rate >= 0.0) || !std::isfinite(learning_rate)) {
        throw ArgumentError("learning_rate must be finite and non-negative");
    }
}

std::string_view to_string(Phase phase) {
    return phase == Phase::train ? "train" : "validation";
}

double accuracy(std::span<const std::size_t> preds, std::span<const std::size_t> labels) {
    check_pair(preds, labels, "accuracy");
    std::size_t correct = 0;
    for (std::size_t i = 0; i < preds.size(); ++i) {
        correct += preds[i] == labels[i] ? 1 : 0;
    }
    return static_cast<double>(correct) / static_cast<double>(preds.size());
}

double mae(std::span<const std::size_t> preds, std::span<const std::size_t> labels) {
    check_pair(preds, labels, "mae");
    double total = 0.0;
    for (std::size_t i = 0; i < preds.size(); ++i) {
        total += std::fabs(static_cast<double>(preds[i]) - static_cast<double>(labels[i]));
    }
    return total / static_cast<double>(preds.size());
}

ConfusionMatrix confusion_matrix(std::span<const std::size_t> preds,
                                 std::span<const std::size_t> labels, std::size_t n_classes) {
    if (preds.size() != labels.size()) {
        throw ArgumentError("confusion_matrix: length mismatch");
    }
    ConfusionMatrix m(n_classes, std::vector<std::size_t>(n_classes, 0));
    for (std::size_t i = 0; i < preds.size(); ++i) {
        if (preds[i] >= n_classes || labels[i] >= n_classes) {
            throw ArgumentError("confusion_matrix: class index out of range at position " +
                                std::to_string(i));
        }
        ++m[labels[i]][preds[i]];
    }
    return m;
}

EvalResult evaluate(const DressedModel &model, const LabeledDataset &ds, Exec exec) {
    check_data_fits(model, ds, "evaluation");
    if (ds.empty()) {
        throw ArgumentError("cannot evaluate an empty dataset");
    }
    const std::size_t n = ds.size();
    std::vector<double> losses(n);
    EvalResult r;
    r.predictions.resize(n);
    if (exec == Exec::parallel) {
#pragma omp parallel for schedule(dynamic)
        for (std::int64_t i = 0; i < static_cast<std::int64_t>(n); ++i) {
            const auto idx = static_cast<std::size_t>(i);
            const auto logits = model_forward(model, ds.row(idx), Exec::serial);
            losses[idx] = softmax_cross_entropy(logits, ds.labels[idx]).loss;
            r.predictions[idx] = argmax(logits);
        }
    } else {
        for (std::size_t i = 0; i < n; ++i) {
            const auto logits = model_forward(model, ds.row(i), Exec::serial);
            losses[i] = softmax_cross_entropy(logits, ds.labels[i]).loss;
            r.predictions[i] = argmax(logits);
        }
    }
    double total = 0.0;
    for (const double l : losses) {
        total += l;
    }
    r.loss = total / static_cast<double>(n);
    r.accuracy = accuracy(r.predictions, ds.labels);
    r.mae = mae(r.predictions, ds.labels);
    r.confusion = confusion_matrix(r.predictions, ds.labels, model.n_classes());
    return r;
}

ModelGrads batch_gradient(const DressedModel &model, const LabeledDataset &ds,
                          std::span<const std::size_t> rows, std::span<const DropoutMasks> masks,
                          Exec exec) {
    if (rows.empty()) {
        throw ArgumentError("batch_gradient: empty batch");
    }
    if (!masks.empty() && masks.size() != rows.size()) {
        throw UsageError("batch_gradient: one dropout mask set per row required");
    }
    static const DropoutMasks kNoMasks;
    std::vector<ModelGrads> per_sample(rows.size());
    auto one = [&](std::size_t i, Exec inner) {
        per_sample[i] = backward(model, ds.row(rows[i]), ds.labels[rows[i]],
                                 masks.empty() ? kNoMasks : masks[i], inner);
    };
    if (exec == Exec::parallel && rows.size() > 1) {
#pragma omp parallel for schedule(dynamic)
        for (std::int64_t i = 0; i < static_cast<std::int64_t>(rows.size()); ++i) {
            one(static_cast<std::size_t>(i), Exec::serial);
        }
    } else {
        for (std::size_t i = 0; i < rows.size(); ++i) {
            one(i, exec);
        }
    }
    // fixed reduction order keeps the result independent of scheduling
    ModelGrads total = ModelGrads::zeros_like(model);
    const double scale = 1.0 / static_cast<double>(rows.size());
    for (const auto &g : per_sample) {
        total.add_scaled(g, scale);
    }
    return total;
}

Optimizer::Optimizer(OptimizerKind kind, double learning_rate, std::size_t n_params)
    : kind_(kind), lr_(learning_rate) {
    if (kind_ == OptimizerKind::adam) {
        m_.assign(n_params, 0.0);
        v_.assign(n_params, 0.0);
    }
}

void Optimizer::step(std::span<const std::span<double>> params, std::span<const double> grad) {
    if (lr_ == 0.0) {
        return;
    }
    ++t_;
    constexpr double beta1 = 0.9;
    constexpr double beta2 = 0.999;
    constexpr double eps = 1e-8;
    const double bc1 = 1.0 - std::pow(beta1, static_cast<double>(t_));
    const double bc2 = 1.0 - std::pow(beta2, static_cast<double>(t_));
    std::size_t k = 0;
    for (const auto &block : params) {
        for (auto &p : block) {
            if (k >= grad.size()) {
                throw ShapeError("optimizer: gradient shorter than parameter list");
            }
            const double g = grad[k];
            if (kind_ == OptimizerKind::sgd) {
                p -= lr_ * g;
            } else {
                m_[k] = beta1 * m_[k] + (1.0 - beta1) * g;
                v_[k] = beta2 * v_[k] + (1.0 - beta2) * g * g;
                const double m_hat = m_[k] / bc1;
                const double v_hat = v_[k] / bc2;
                p -= lr_ * m_hat / (std::sqrt(v_hat) + eps);
            }
            ++k;
        }
    }
    if (k != grad.size()) {
        throw ShapeError("optimizer: gradient longer than parameter list");
    }
}

FitResult fit(DressedModel model, const LabeledDataset &train, const Batches &batches,
              const LabeledDataset &validation, const TrainConfig &cfg,
              const EpochCallback &on_epoch) {
    cfg.validate();
    model.validate();
    check_data_fits(model, train, "train");
    check_data_fits(model, validation, "validation");
    if (train.empty() || validation.empty() || batches.empty()) {
        throw ArgumentError("fit needs non-empty train and validation splits");
    }
    for (const auto &b : batches) {
        for (const auto r : b) {
            if (r >= train.size()) {
                throw IndexError("batch refers to train row " + std::to_string(r));
            }
        }
    }
    if (cfg.use_lora != model.has_lora()) {
        throw ArgumentError(cfg.use_lora ? "use_lora set but the model has no adapters"
                                         : "model has adapters but use_lora is not set");
    }

    std::size_t n_params = 0;
    for (const auto &block : trainable_parameters(model)) {
        n_params += block.size();
    }
    Optimizer optimizer(cfg.optimizer, cfg.learning_rate, n_params);

    FitResult result;
    std::vector<std::size_t> order(batches.size());
    for (std::size_t epoch = 1; epoch <= cfg.epochs; ++epoch) {
        for (std::size_t i = 0; i < order.size(); ++i) {
            order[i] = i;
        }
        if (cfg.reshuffle && epoch > 1) {
            Rng rng(derive_seed(cfg.seed, {epoch, 0x6f72}));
            rng.shuffle(order);
        }

        set_training_mode(model, true);
        for (std::size_t step = 0; step < order.size(); ++step) {
            const auto &rows = batches[order[step]];
            std::vector<DropoutMasks> masks;
            if (model.has_lora()) {
                masks.reserve(rows.size());
                for (std::size_t pos = 0; pos < rows.size(); ++pos) {
                    Rng rng(derive_seed(cfg.seed, {epoch, step, pos, 0x646f}));
                    masks.push_back(draw_dropout_masks(model, rng));
                }
            }
            const auto grads = batch_gradient(model, train, rows, masks, cfg.exec);
            const auto flat = grads.flatten();
            if (!std::isfinite(grads.loss) || !all_finite(flat)) {
                throw DivergenceError(epoch, step + 1);
            }
            const auto params = trainable_parameters(model);
            optimizer.step(params, flat);
        }
        set_training_mode(model, false);

        const auto train_eval = evaluate(model, train, cfg.exec);
        const auto before = parameter_checksum(model);
        const auto val_eval = evaluate(model, validation, cfg.exec);
        const auto after = parameter_checksum(model);
        result.validation_checksums.emplace_back(before, after);
        if (!std::isfinite(train_eval.loss)) {
            throw DivergenceError(epoch, order.size());
        }

        const MetricsRecord tr{epoch, Phase::train, train_eval.accuracy, train_eval.loss,
                               train_eval.mae};
        const MetricsRecord va{epoch, Phase::validation, val_eval.accuracy, val_eval.loss,
                               val_eval.mae};
        result.history.push_back(tr);
        result.history.push_back(va);
        if (epoch == cfg.epochs) {
            result.train_confusion = train_eval.confusion;
            result.validation_confusion = val_eval.confusion;
        }
        if (on_epoch) {
            on_epoch(tr, va);
        }
    }
    result.model = std::move(model);
    return result;
}

void write_metrics_csv(std::span<const MetricsRecord> history, std::ostream &out) {
    out << "epoch,phase,accuracy,loss,mae\n";
    char buf[128];
    for (const auto &r : history) {
        std::snprintf(buf, sizeof buf, "%zu,%s,%.17g,%.17g,%.17g\n", r.epoch,
                      std::string(to_string(r.phase)).c_str(), r.accuracy, r.loss, r.mae);
        out << buf;
    }
}

std::string confusion_json(std::span<const std::string> class_names,
                           std::span<const std::pair<std::string, ConfusionMatrix>> matrices) {
    nlohmann::ordered_json j;
    j["class_names"] = std::vector<std::string>(class_names.begin(), class_names.end());
    for (const auto &[name, m] : matrices) {
        j[name] = m;
    }
    return j.dump(2) + "\n";
}

} // namespace qdressed
