#pragma once

#include <filesystem>
#include <optional>
#include <string>

#include <json.hpp>

#include "sgcn/dataset.hpp"
#include "sgcn/network.hpp"
#include "sgcn/trainer.hpp"

namespace sgcn {

/// Version tag carried by every JSON document this library reads or writes.
inline constexpr const char* kSchema = "sgcn/1";

/// A model + trainer description, as stored in preset files:
///
///   {"schema": "sgcn/1", "name": "cora", "alpha": 0.35,
///    "layers": [{"q": 4, "channels": [{"gcn": 1, "width": 10},
///                                     {"scattering": [3, 2], "width": 6}]}],
///    "train": {"learning_rate": 0.01, "seed": 0, ...},
///    "data_dir": "data/cora"}
///
/// Scattering paths list scales innermost first. input_dim and n_classes are
/// normally left out and filled in from the dataset by bind_to_dataset.
struct RunConfig {
    std::string name;
    ModelSpec model;
    TrainConfig train;
    std::optional<std::string> data_dir;
};

/// Strict parsing: unknown keys, wrong types and invalid values raise
/// ParseError naming `source`.
RunConfig run_config_from_json(const nlohmann::json& doc, const std::string& source);
RunConfig load_run_config(const std::filesystem::path& file);
nlohmann::json to_json(const RunConfig& config);

nlohmann::json model_spec_to_json(const ModelSpec& spec);
/// Fields of a RunConfig's model part; unknown keys are left for the caller.
ModelSpec model_spec_from_json(const nlohmann::json& doc, const std::string& source);

nlohmann::json train_config_to_json(const TrainConfig& config);
TrainConfig train_config_from_json(const nlohmann::json& doc, const std::string& source);

nlohmann::json metrics_to_json(const MetricsReport& report);

/// Sets input_dim and n_classes from the data.
void bind_to_dataset(ModelSpec& spec, const Dataset& data);

/// Parses a JSON file, mapping syntax errors to ParseError with a line number.
nlohmann::json read_json_file(const std::filesystem::path& file);

} // namespace sgcn
