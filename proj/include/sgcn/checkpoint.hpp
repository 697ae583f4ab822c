#pragma once

#include <filesystem>
#include <string>

#include <json.hpp>

#include "sgcn/network.hpp"

namespace sgcn {

/// A trained model: its spec (with bound dimensions) and parameters.
///
///   {"schema": "sgcn/1", "kind": "checkpoint", "model": {...},
///    "params": {"layers": [[{"theta": {"rows": r, "cols": c, "data": [...]},
///                            "bias": [...]}, ...]],
///               "residual": {...}}}
///
/// Matrices are stored row-major. Doubles round-trip exactly.
struct Checkpoint {
    ModelSpec spec;
    ModelParams params;
};

nlohmann::json checkpoint_to_json(const ModelSpec& spec, const ModelParams& params);
/// Throws ParseError naming `source` on any structural problem.
Checkpoint checkpoint_from_json(const nlohmann::json& doc, const std::string& source);

void save_checkpoint(const ModelSpec& spec, const ModelParams& params, const std::filesystem::path& file);
Checkpoint load_checkpoint(const std::filesystem::path& file);

} // namespace sgcn
