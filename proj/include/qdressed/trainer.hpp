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
#include <cstdint>
#include <functional>
#include <iosfwd>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "qdressed/dataio.hpp"
#include "qdressed/dataset.hpp"
#include "qdressed/model.hpp"

namespace qdressed {

enum class OptimizerKind { sgd, adam };

/// "sgd" or "adam".
OptimizerKind parse_optimizer(std::string_view name);
std::string_view to_string(OptimizerKind kind);

/// Default step size per optimizer: 0.05 for SGD, 0.001 for Adam.
double default_learning_rate(OptimizerKind kind);

struct TrainConfig {
    std::size_t epochs{10};
    double learning_rate{0.05};
    OptimizerKind optimizer{OptimizerKind::sgd};
    std::uint64_t seed{0};
    bool use_lora{false};
    bool use_smote{false};
    /// Re-permute the batch order at the start of every epoch.
    bool reshuffle{true};
    Exec exec{Exec::parallel};

    /// epochs ≥ 1, learning_rate finite and ≥ 0 (0 freezes every parameter).
    void validate() const;
};

enum class Phase { train, validation };
std::string_view to_string(Phase phase);

struct MetricsRecord {
    std::size_t epoch{0};
    Phase phase{Phase::train};
    double accuracy{0.0};
    double loss{0.0};
    double mae{0.0};

    friend bool operator==(const MetricsRecord &, const MetricsRecord &) = default;
};

/// Fraction of positions where prediction equals label.
double accuracy(std::span<const std::size_t> preds, std::span<const std::size_t> labels);

/// Mean |pred − label| over integer class indices.
double mae(std::span<const std::size_t> preds, std::span<const std::size_t> labels);

/// counts[true][pred]
using ConfusionMatrix = std::vector<std::vector<std::size_t>>;

ConfusionMatrix confusion_matrix(std::span<const std::size_t> preds,
                                 std::span<const std::size_t> labels, std::size_t n_classes);

struct EvalResult {
    double accuracy{0.0};
    double loss{0.0}; // mean cross-entropy
    double mae{0.0};
    std::vector<std::size_t> predictions;
    ConfusionMatrix confusion;
};

/// Forward-only pass over `ds` (adapters must be in evaluation mode).
EvalResult evaluate(const DressedModel &model, const LabeledDataset &ds,
                    Exec exec = Exec::parallel);

/// Mean loss and gradient over the rows of one batch. `masks` is empty or one entry per row.
ModelGrads batch_gradient(const DressedModel &model, const LabeledDataset &ds,
                          std::span<const std::size_t> rows,
                          std::span<const DropoutMasks> masks = {}, Exec exec = Exec::parallel);

/// SGD or Adam (β₁ 0.9, β₂ 0.999, ε 1e-8) over a fixed list of parameter views.
class Optimizer {
  public:
    Optimizer(OptimizerKind kind, double learning_rate, std::size_t n_params);

    /// Updates `params` (concatenated in order) with gradient `grad`.
    void step(std::span<const std::span<double>> params, std::span<const double> grad);

  private:
    OptimizerKind kind_;
    double lr_;
    std::size_t t_{0};
    std::vector<double> m_;
    std::vector<double> v_;
};

struct FitResult {
    DressedModel model;
    std::vector<MetricsRecord> history; // train then validation, per epoch
    ConfusionMatrix train_confusion;
    ConfusionMatrix validation_confusion;
    /// Parameter checksum immediately before and after each validation pass.
    std::vector<std::pair<std::uint64_t, std::uint64_t>> validation_checksums;
};

using EpochCallback = std::function<void(const MetricsRecord &train, const MetricsRecord &val)>;

/**
 * Two-phase epoch loop.
 *
 * Train phase: for each batch, average per-sample gradients and take one
 * optimizer step. Plain layers train W and b; adapted layers train only A
 * and B. Circuit angles always train. Dropout masks come from a stream
 * keyed by (seed, epoch, batch, row position).
 *
 * After the updates, the train split and the validation split are both
 * evaluated forward-only; these give the epoch's two MetricsRecords.
 *
 * Throws DivergenceError on a non-finite batch loss and ShapeError when the
 * data does not fit the model.
 */
FitResult fit(DressedModel model, const LabeledDataset &train, const Batches &batches,
              const LabeledDataset &validation, const TrainConfig &cfg,
              const EpochCallback &on_epoch = {});

/// `epoch,phase,accuracy,loss,mae` with values printed to 17 significant digits.
void write_metrics_csv(std::span<const MetricsRecord> history, std::ostream &out);

/// {"class_names": [...], "<name>": [[...]], ...} for each (name, matrix) pair.
std::string confusion_json(std::span<const std::string> class_names,
                           std::span<const std::pair<std::string, ConfusionMatrix>> matrices);

} // namespace qdressed
