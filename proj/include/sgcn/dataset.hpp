#pragma once

#include <cstddef>
#include <filesystem>
#include <span>
#include <string_view>
#include <vector>

#include "sgcn/graph.hpp"

namespace sgcn {

/// A graph with node features, integer labels (-1 = unlabeled) and the
/// train / validation / test node sets.
struct Dataset {
    Graph graph;
    SignalMatrix features;
    std::vector<int> labels;
    std::size_t n_classes = 0;
    std::vector<NodeId> train;
    std::vector<NodeId> val;
    std::vector<NodeId> test;

    /// "train", "val" or "test". Throws std::invalid_argument otherwise.
    std::span<const NodeId> split(std::string_view name) const;

    /// Throws std::invalid_argument when masks overlap, a masked node is
    /// unlabeled, or sizes disagree.
    void validate() const;
};

/// Scales every row to unit sum. Zero rows stay zero; rows already summing
/// to 1 within 1e-12 are left untouched so normalization is idempotent.
void row_normalize(SignalMatrix& features);

/// Reads graph.txt: "n m" header, then m lines "u v [w]". Throws ParseError.
Graph read_graph(const std::filesystem::path& file);
void write_graph(const Graph& g, const std::filesystem::path& file);

/// features.txt: "n d" header, then n lines of d numbers.
SignalMatrix read_features_text(const std::filesystem::path& file);
void write_features_text(const SignalMatrix& x, const std::filesystem::path& file);

/// features.bin: magic "SGCNF1", rows and cols as little-endian u64, then
/// rows * cols little-endian doubles in row-major order.
SignalMatrix read_features_binary(const std::filesystem::path& file);
void write_features_binary(const SignalMatrix& x, const std::filesystem::path& file);

struct LoadOptions {
    bool normalize_features = true;
};

/// Loads graph.txt, features.txt (or features.bin), labels.txt and
/// split_{train,val,test}.txt from dir. Isolated nodes receive a self-loop.
Dataset load_dataset(const std::filesystem::path& dir, const LoadOptions& options = {});

/// Two 10-node cliques joined by the single edge 9 -- 10, one-hot node
/// features, class = clique. Train {0, 1, 10, 11}, val {2, 3, 12, 13}, test
/// the remaining twelve nodes.
Dataset make_two_clique_toy();

/// Writes the files read by load_dataset. Output is byte-stable for equal input.
void save_dataset(const Dataset& data, const std::filesystem::path& dir, bool binary_features = false);

} // namespace sgcn
