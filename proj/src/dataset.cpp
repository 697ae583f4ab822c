#include "sgcn/dataset.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstring>
#include <stdexcept>
#include <string>

#include "sgcn/error.hpp"
#include "text_format.hpp"

namespace sgcn {

namespace fs = std::filesystem;
using detail::LineReader;

namespace {

constexpr char kBinaryMagic[6] = {'S', 'G', 'C', 'N', 'F', '1'};

static_assert(std::endian::native == std::endian::little, "binary feature I/O assumes a little-endian host");

std::vector<NodeId> read_split(const fs::path& file, std::size_t n) {
    LineReader in(file);
    std::vector<NodeId> out;
    std::vector<std::string_view> tok;
    while (in.next(tok)) {
        if (tok.size() != 1) in.fail("expected one node index per line");
        const auto id = in.parse<std::size_t>(tok[0]);
        if (id >= n) in.fail("node index " + std::to_string(id) + " out of range (n = " + std::to_string(n) + ")");
        out.push_back(static_cast<NodeId>(id));
    }
    return out;
}

void write_split(std::span<const NodeId> ids, const fs::path& file) {
    std::string out;
    for (NodeId id : ids) {
        out += std::to_string(id);
        out += '\n';
    }
    detail::write_file(file, out);
}

} // namespace

std::span<const NodeId> Dataset::split(std::string_view name) const {
    if (name == "train") return train;
    if (name == "val") return val;
    if (name == "test") return test;
    throw std::invalid_argument("unknown split '" + std::string(name) + "' (expected train, val or test)");
}

void Dataset::validate() const {
    const std::size_t n = graph.node_count();
    if (static_cast<std::size_t>(features.rows()) != n) throw std::invalid_argument("feature rows do not match node count");
    if (labels.size() != n) throw std::invalid_argument("label count does not match node count");
    if (!features.allFinite()) throw std::invalid_argument("features contain non-finite values");
    for (int label : labels)
        if (label < -1 || (label >= 0 && static_cast<std::size_t>(label) >= n_classes))
            throw std::invalid_argument("label " + std::to_string(label) + " outside [-1, n_classes)");
    std::vector<char> owner(n, 0);
    const std::pair<const char*, const std::vector<NodeId>*> splits[] = {{"train", &train}, {"val", &val}, {"test", &test}};
    for (int s = 0; s < 3; ++s) {
        for (NodeId id : *splits[s].second) {
            if (id >= n) throw std::invalid_argument(std::string(splits[s].first) + " split: node out of range");
            if (owner[id]) throw std::invalid_argument("node " + std::to_string(id) + " appears in more than one split");
            owner[id] = static_cast<char>(s + 1);
            if (labels[id] < 0)
                throw std::invalid_argument(std::string(splits[s].first) + " split: node " + std::to_string(id) + " is unlabeled");
        }
    }
}

void row_normalize(SignalMatrix& features) {
    for (Eigen::Index i = 0; i < features.rows(); ++i) {
        const double sum = features.row(i).sum();
        if (sum == 0.0 || std::abs(sum - 1.0) <= 1e-12) continue;
        features.row(i) /= sum;
    }
}

Graph read_graph(const fs::path& file) {
    LineReader in(file);
    std::vector<std::string_view> tok;
    if (!in.next(tok) || tok.size() != 2) in.fail("expected header 'n m'");
    const auto n = in.parse<std::size_t>(tok[0]);
    const auto m = in.parse<std::size_t>(tok[1]);
    std::vector<Edge> edges;
    edges.reserve(m);
    while (in.next(tok)) {
        if (edges.size() == m) in.fail("more edge lines than the header's m = " + std::to_string(m));
        if (tok.size() != 2 && tok.size() != 3) in.fail("expected 'u v [w]'");
        const auto u = in.parse<std::size_t>(tok[0]);
        const auto v = in.parse<std::size_t>(tok[1]);
        const double w = tok.size() == 3 ? in.parse<double>(tok[2]) : 1.0;
        if (u >= n || v >= n) in.fail("node id out of range (n = " + std::to_string(n) + ")");
        edges.push_back({static_cast<NodeId>(u), static_cast<NodeId>(v), w});
    }
    if (edges.size() != m)
        throw ParseError(in.name(), 0, "header declares " + std::to_string(m) + " edges, found " + std::to_string(edges.size()));
    try {
        return build_graph(n, edges);
    } catch (const std::invalid_argument& e) {
        throw ParseError(in.name(), 0, e.what());
    }
}

void write_graph(const Graph& g, const fs::path& file) {
    const auto edges = g.edges();
    std::string out = std::to_string(g.node_count()) + " " + std::to_string(edges.size()) + "\n";
    for (const Edge& e : edges) {
        out += std::to_string(e.u);
        out += ' ';
        out += std::to_string(e.v);
        if (e.weight != 1.0) {
            out += ' ';
            detail::append_number(out, e.weight);
        }
        out += '\n';
    }
    detail::write_file(file, out);
}

SignalMatrix read_features_text(const fs::path& file) {
    LineReader in(file);
    std::vector<std::string_view> tok;
    if (!in.next(tok) || tok.size() != 2) in.fail("expected header 'n d'");
    const auto n = in.parse<std::size_t>(tok[0]);
    const auto d = in.parse<std::size_t>(tok[1]);
    SignalMatrix x(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(d));
    std::size_t row = 0;
    while (in.next(tok)) {
        if (row == n) in.fail("more feature rows than the header's n = " + std::to_string(n));
        if (tok.size() != d) in.fail("expected " + std::to_string(d) + " values, found " + std::to_string(tok.size()));
        for (std::size_t j = 0; j < d; ++j) {
            const double v = in.parse<double>(tok[j]);
            if (!std::isfinite(v)) in.fail("non-finite feature value");
            x(static_cast<Eigen::Index>(row), static_cast<Eigen::Index>(j)) = v;
        }
        ++row;
    }
    if (row != n) throw ParseError(in.name(), 0, "header declares " + std::to_string(n) + " rows, found " + std::to_string(row));
    return x;
}

void write_features_text(const SignalMatrix& x, const fs::path& file) {
    std::string out = std::to_string(x.rows()) + " " + std::to_string(x.cols()) + "\n";
    for (Eigen::Index i = 0; i < x.rows(); ++i) {
        for (Eigen::Index j = 0; j < x.cols(); ++j) {
            if (j) out += ' ';
            detail::append_number(out, x(i, j));
        }
        out += '\n';
    }
    detail::write_file(file, out);
}

SignalMatrix read_features_binary(const fs::path& file) {
    const std::string raw = detail::read_file(file);
    const std::size_t header = sizeof kBinaryMagic + 2 * sizeof(std::uint64_t);
    if (raw.size() < header || std::memcmp(raw.data(), kBinaryMagic, sizeof kBinaryMagic) != 0)
        throw ParseError(file.string(), 0, "missing SGCNF1 header");
    std::uint64_t rows = 0, cols = 0;
    std::memcpy(&rows, raw.data() + 6, 8);
    std::memcpy(&cols, raw.data() + 14, 8);
    if (cols != 0 && rows > (raw.size() - header) / sizeof(double) / cols)
        throw ParseError(file.string(), 0, "payload shorter than declared dimensions");
    if (raw.size() != header + rows * cols * sizeof(double))
        throw ParseError(file.string(), 0, "payload size does not match declared dimensions");
    SignalMatrix x(static_cast<Eigen::Index>(rows), static_cast<Eigen::Index>(cols));
    std::memcpy(x.data(), raw.data() + header, rows * cols * sizeof(double));
    if (!x.allFinite()) throw ParseError(file.string(), 0, "non-finite feature value");
    return x;
}

void write_features_binary(const SignalMatrix& x, const fs::path& file) {
    std::string out(kBinaryMagic, sizeof kBinaryMagic);
    const std::uint64_t dims[2] = {static_cast<std::uint64_t>(x.rows()), static_cast<std::uint64_t>(x.cols())};
    out.append(reinterpret_cast<const char*>(dims), sizeof dims);
    out.append(reinterpret_cast<const char*>(x.data()), static_cast<std::size_t>(x.size()) * sizeof(double));
    detail::write_file(file, out);
}

Dataset load_dataset(const fs::path& dir, const LoadOptions& options) {
    Dataset data;
    data.graph = read_graph(dir / "graph.txt");
    const std::size_t n = data.graph.node_count();

    const fs::path text = dir / "features.txt";
    const fs::path binary = dir / "features.bin";
    if (fs::exists(text))
        data.features = read_features_text(text);
    else if (fs::exists(binary))
        data.features = read_features_binary(binary);
    else
        throw ParseError(text.string(), 0, "no features.txt or features.bin in dataset directory");
    if (static_cast<std::size_t>(data.features.rows()) != n)
        throw ParseError((fs::exists(text) ? text : binary).string(), 0,
                         "feature rows (" + std::to_string(data.features.rows()) + ") do not match graph nodes (" +
                             std::to_string(n) + ")");
    if (options.normalize_features) row_normalize(data.features);

    LineReader labels(dir / "labels.txt");
    std::vector<std::string_view> tok;
    while (labels.next(tok)) {
        if (tok.size() != 1) labels.fail("expected one label per line");
        if (data.labels.size() == n) labels.fail("more labels than nodes (" + std::to_string(n) + ")");
        const int label = labels.parse<int>(tok[0]);
        if (label < -1) labels.fail("label must be >= -1");
        data.labels.push_back(label);
    }
    if (data.labels.size() != n)
        throw ParseError(labels.name(), 0,
                         "found " + std::to_string(data.labels.size()) + " labels for " + std::to_string(n) + " nodes");
    const int max_label = data.labels.empty() ? -1 : *std::max_element(data.labels.begin(), data.labels.end());
    data.n_classes = static_cast<std::size_t>(max_label + 1);

    data.train = read_split(dir / "split_train.txt", n);
    data.val = read_split(dir / "split_val.txt", n);
    data.test = read_split(dir / "split_test.txt", n);
    try {
        data.validate();
    } catch (const std::invalid_argument& e) {
        throw ParseError(dir.string(), 0, e.what());
    }
    return data;
}

Dataset make_two_clique_toy() {
    constexpr NodeId half = 10;
    std::vector<Edge> edges;
    for (NodeId base : {NodeId{0}, half})
        for (NodeId u = base; u < base + half; ++u)
            for (NodeId v = u + 1; v < base + half; ++v) edges.push_back({u, v});
    edges.push_back({half - 1, half});

    Dataset data;
    data.graph = build_graph(2 * half, edges);
    data.features = SignalMatrix::Identity(2 * half, 2 * half);
    data.n_classes = 2;
    for (NodeId u = 0; u < 2 * half; ++u) {
        data.labels.push_back(u < half ? 0 : 1);
        const NodeId local = u % half;
        (local < 2 ? data.train : local < 4 ? data.val : data.test).push_back(u);
    }
    std::sort(data.test.begin(), data.test.end());
    return data;
}

void save_dataset(const Dataset& data, const fs::path& dir, bool binary_features) {
    data.validate();
    std::error_code ec;
    fs::create_directories(dir, ec);
    if (ec) throw std::runtime_error(dir.string() + ": " + ec.message());
    write_graph(data.graph, dir / "graph.txt");
    if (binary_features) {
        fs::remove(dir / "features.txt");
        write_features_binary(data.features, dir / "features.bin");
    } else {
        fs::remove(dir / "features.bin");
        write_features_text(data.features, dir / "features.txt");
    }
    std::string labels;
    for (int l : data.labels) labels += std::to_string(l) + "\n";
    detail::write_file(dir / "labels.txt", labels);
    write_split(data.train, dir / "split_train.txt");
    write_split(data.val, dir / "split_val.txt");
    write_split(data.test, dir / "split_test.txt");
}

} // namespace sgcn
