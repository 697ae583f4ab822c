#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <string_view>
#include <vector>

#include "sgcn/dataset.hpp"
#include "sgcn/network.hpp"

namespace sgcn {

/// Adam with L2 weight decay on the Theta matrices (biases are not decayed).
struct TrainConfig {
    double learning_rate = 0.01;
    double beta1 = 0.9;
    double beta2 = 0.999;
    double epsilon = 1e-8;
    double weight_decay = 5e-4;
    std::size_t epochs = 400;
    /// Stop after this many epochs without a validation improvement.
    std::size_t patience = 30;
    std::uint64_t seed = 0;

    /// Throws std::invalid_argument on out-of-range values.
    void validate() const;

    friend bool operator==(const TrainConfig&, const TrainConfig&) = default;
};

/// Metrics of the parameters after `epoch` updates.
struct EpochMetrics {
    std::size_t epoch = 0;
    double train_loss = 0;
    double train_acc = 0;
    double val_loss = 0;
    double val_acc = 0;
    double test_acc = 0;
};

struct MetricsReport {
    std::vector<EpochMetrics> curve;
    std::size_t best_epoch = 0;
    double best_val_acc = 0;
    /// Test accuracy of the best-validation parameters.
    double test_acc = 0;
    bool early_stopped = false;
};

struct TrainResult {
    ModelParams params; ///< best-validation parameters
    MetricsReport report;
};

/// Called once per epoch; for progress logging.
using EpochObserver = std::function<void(const EpochMetrics&)>;

/// Trains spec on data. Model selection uses validation accuracy (validation
/// loss breaks ties); with an empty validation split, training accuracy and
/// loss stand in. Throws DivergenceError (with the epoch) on non-finite values
/// and std::invalid_argument when spec and data disagree.
TrainResult train(const ModelSpec& spec, const Dataset& data, const TrainConfig& config,
                  const EpochObserver& observer = {});

/// Accuracy of params on the named split.
double evaluate(const ModelSpec& spec, const ModelParams& params, const Dataset& data, std::string_view split);

} // namespace sgcn
