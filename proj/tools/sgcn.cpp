// sgcn: command-line front end. stdout carries one JSON document per run;
// logs go to stderr. Exit codes: 0 ok, 1 check failure, 2 usage or I/O error.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <stdexcept>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "sgcn/checkpoint.hpp"
#include "sgcn/config.hpp"
#include "sgcn/dataset.hpp"
#include "sgcn/error.hpp"
#include "sgcn/lemmalab.hpp"
#include "sgcn/parallel.hpp"
#include "sgcn/scattering.hpp"
#include "sgcn/spectral.hpp"
#include "sgcn/trainer.hpp"

namespace fs = std::filesystem;
using nlohmann::json;
using namespace sgcn;

namespace {

constexpr int kOk = 0;
constexpr int kCheckFailed = 1;
constexpr int kUsage = 2;

// Single-seed reference accuracies of the Cora channel ablation, for the report footer.
const json kCoraAblationReference = {{"full", 84.2}, {"A^1", 82.0}, {"A^2", 80.7}, {"A^3", 80.9},
                                     {"Psi_2", 83.7}, {"Psi_1", 82.7}};

void emit(json doc) {
    doc["schema"] = kSchema;
    std::cout << doc.dump(2) << '\n';
}

json number_or_null(double v) { return std::isfinite(v) ? json(v) : json(nullptr); }

std::vector<std::size_t> parse_list(const std::string& text) {
    std::vector<std::size_t> out;
    std::size_t pos = 0;
    while (pos <= text.size()) {
        const std::size_t comma = std::min(text.find(',', pos), text.size());
        const std::string item = text.substr(pos, comma - pos);
        std::size_t used = 0;
        unsigned long long v = 0;
        try {
            v = std::stoull(item, &used);
        } catch (const std::exception&) {
            used = std::string::npos;
        }
        if (item.empty() || used != item.size() || item[0] == '-') throw std::invalid_argument("bad list item '" + item + "' in '" + text + "'");
        out.push_back(static_cast<std::size_t>(v));
        pos = comma + 1;
    }
    return out;
}

void write_text(const fs::path& file, const std::string& text) {
    std::ofstream out(file, std::ios::binary | std::ios::trunc);
    if (!out || !(out << text)) throw std::runtime_error(file.string() + ": cannot write");
}

/// Loads the dataset and binds the model dimensions to it.
Dataset load_for(RunConfig& cfg, const std::string& data_dir) {
    std::string dir = data_dir;
    if (dir.empty() && cfg.data_dir) dir = *cfg.data_dir;
    if (dir.empty()) throw std::invalid_argument("no dataset directory: pass --data-dir or set data_dir in the config");
    Dataset data = load_dataset(dir);
    bind_to_dataset(cfg.model, data);
    std::cerr << "loaded " << dir << ": " << data.graph.node_count() << " nodes, " << data.graph.edge_count() << " edges, "
              << data.features.cols() << " features, " << data.n_classes << " classes\n";
    return data;
}

// ---- subcommands ---------------------------------------------------------

struct VerifyArgs {
    std::string lengths;
    std::optional<double> tolerance;
    std::uint64_t seed = 0;
};

int cmd_verify(const VerifyArgs& args) {
    SweepOptions opts;
    opts.seed = args.seed;
    opts.tolerance = args.tolerance;
    if (!args.lengths.empty()) opts.lengths = parse_list(args.lengths);
    const auto reports = run_lemma_sweep(opts);

    json items = json::array();
    std::size_t failed = 0;
    for (const auto& r : reports) {
        failed += !r.pass;
        std::fprintf(stderr, "%-4s %-10s %-55s dev=%-11.3g tol=%.1g%s%s\n", r.pass ? "ok" : "FAIL", r.lemma.c_str(),
                     r.parameters.c_str(), r.max_deviation, r.tolerance, r.note.empty() ? "" : "  ", r.note.c_str());
        json item = {{"lemma", r.lemma},          {"parameters", r.parameters}, {"max_deviation", number_or_null(r.max_deviation)},
                     {"tolerance", r.tolerance}, {"pass", r.pass},             {"witness", r.witness}};
        if (r.first_violation_node) {
            item["first_violation_node"] = *r.first_violation_node;
            item["first_violation_value"] = number_or_null(r.first_violation_value);
        }
        if (!r.note.empty()) item["note"] = r.note;
        items.push_back(std::move(item));
    }
    std::fprintf(stderr, "%zu checks, %zu failed\n", reports.size(), failed);
    emit({{"command", "verify-lemmas"}, {"seed", args.seed}, {"checks", reports.size()}, {"failed", failed},
          {"all_pass", failed == 0}, {"reports", std::move(items)}});
    return failed ? kCheckFailed : kOk;
}

struct ScatterArgs {
    std::string graph, signal, path, out;
};

int cmd_scatter(const ScatterArgs& args) {
    const ScatteringPath path = ScatteringPath::parse(args.path);
    const Graph g = read_graph(args.graph);
    const SignalMatrix x = read_features_text(args.signal);
    if (static_cast<std::size_t>(x.rows()) != g.node_count())
        throw std::invalid_argument("signal has " + std::to_string(x.rows()) + " rows, graph has " +
                                    std::to_string(g.node_count()) + " nodes");
    const SignalMatrix y = scatter_node(lazy_walk(g), path, x);
    write_features_text(y, args.out);
    emit({{"command", "scatter"}, {"path", path.to_string()}, {"rows", y.rows()}, {"cols", y.cols()}, {"out", args.out}});
    return kOk;
}

struct TrainArgs {
    std::string data_dir, config, out, metrics;
    std::optional<std::uint64_t> seed;
};

int cmd_train(const TrainArgs& args) {
    RunConfig cfg = load_run_config(args.config);
    if (args.seed) cfg.train.seed = *args.seed;
    const Dataset data = load_for(cfg, args.data_dir);

    const auto start = std::chrono::steady_clock::now();
    const TrainResult result = train(cfg.model, data, cfg.train, [](const EpochMetrics& m) {
        if (m.epoch % 25 == 0)
            std::fprintf(stderr, "epoch %4zu  loss %.4f  train %.3f  val %.3f\n", m.epoch, m.train_loss, m.train_acc, m.val_acc);
    });
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    std::fprintf(stderr, "best epoch %zu  val %.4f  test %.4f  (%.1fs)\n", result.report.best_epoch,
                 result.report.best_val_acc, result.report.test_acc, secs);

    save_checkpoint(cfg.model, result.params, args.out);
    json doc = metrics_to_json(result.report);
    if (!args.metrics.empty()) write_text(args.metrics, doc.dump(2) + "\n");
    doc["command"] = "train";
    doc["name"] = cfg.name;
    doc["seed"] = cfg.train.seed;
    doc["checkpoint"] = args.out;
    emit(std::move(doc));
    return kOk;
}

struct EvalArgs {
    std::string data_dir, model, split = "test";
};

int cmd_eval(const EvalArgs& args) {
    const Checkpoint ckpt = load_checkpoint(args.model);
    const Dataset data = load_dataset(args.data_dir);
    const auto nodes = data.split(args.split);
    const double acc = evaluate(ckpt.spec, ckpt.params, data, args.split);
    emit({{"command", "eval"}, {"split", args.split}, {"nodes", nodes.size()}, {"accuracy", acc}});
    return kOk;
}

struct AblateArgs {
    std::string data_dir, config, drop, csv;
    std::size_t layer = 0;
    std::size_t seeds = 5;
};

int cmd_ablate(const AblateArgs& args) {
    RunConfig cfg = load_run_config(args.config);
    if (args.layer >= cfg.model.layers.size()) throw std::out_of_range("--layer " + std::to_string(args.layer) + " out of range");
    const std::size_t n_channels = cfg.model.layers[args.layer].channels.size();
    std::vector<std::size_t> drops;
    if (args.drop == "all") {
        for (std::size_t c = 0; c < n_channels; ++c) drops.push_back(c);
    } else {
        drops = parse_list(args.drop);
        for (std::size_t c : drops)
            if (c >= n_channels)
                throw std::out_of_range("--drop " + std::to_string(c) + " out of range (layer has " + std::to_string(n_channels) +
                                        " channels)");
    }
    if (args.seeds == 0) throw std::invalid_argument("--seeds must be at least 1");
    const Dataset data = load_for(cfg, args.data_dir);

    auto run = [&](const ModelSpec& spec, const std::string& label) {
        std::vector<double> accs;
        for (std::size_t s = 0; s < args.seeds; ++s) {
            TrainConfig tc = cfg.train;
            tc.seed = cfg.train.seed + s;
            accs.push_back(train(spec, data, tc).report.test_acc);
            std::fprintf(stderr, "%-14s seed %llu  test %.4f\n", label.c_str(), static_cast<unsigned long long>(tc.seed), accs.back());
        }
        double mean = 0, var = 0;
        for (double a : accs) mean += a;
        mean /= static_cast<double>(accs.size());
        for (double a : accs) var += (a - mean) * (a - mean);
        const double sd = accs.size() > 1 ? std::sqrt(var / static_cast<double>(accs.size() - 1)) : 0.0;
        return json{{"label", label}, {"mean", mean}, {"std", sd}, {"accuracies", accs}};
    };

    json full = run(cfg.model, "full");
    json rows = json::array();
    std::string csv = "removed,label,mean,std";
    for (std::size_t s = 0; s < args.seeds; ++s) csv += ",seed" + std::to_string(cfg.train.seed + s);
    csv += '\n';
    auto csv_row = [&](const std::string& removed, const json& r) {
        char buf[64];
        std::snprintf(buf, sizeof buf, ",%.6f,%.6f", r["mean"].get<double>(), r["std"].get<double>());
        csv += removed + "," + r["label"].get<std::string>() + buf;
        for (double a : r["accuracies"]) {
            std::snprintf(buf, sizeof buf, ",%.6f", a);
            csv += buf;
        }
        csv += '\n';
    };
    csv_row("none", full);
    for (std::size_t c : drops) {
        const ModelSpec spec = ablate_channel(cfg.model, c, args.layer);
        json r = run(spec, "-" + cfg.model.layers[args.layer].channels[c].label());
        r["removed"] = c;
        r["concat_width"] = spec.concat_width();
        r["delta_vs_full"] = r["mean"].get<double>() - full["mean"].get<double>();
        csv_row(std::to_string(c), r);
        rows.push_back(std::move(r));
    }
    if (!args.csv.empty()) write_text(args.csv, csv);

    emit({{"command", "ablate"},
          {"name", cfg.name},
          {"layer", args.layer},
          {"seeds", args.seeds},
          {"full", std::move(full)},
          {"ablations", std::move(rows)},
          {"reference",
           {{"dataset", "cora"},
            {"note", "single-run reference accuracies (%) for the channel ablation; meaningful only for the Cora preset"},
            {"accuracy", kCoraAblationReference}}}});
    return kOk;
}

struct SpectrumArgs {
    std::string graph, out;
};

int cmd_spectrum(const SpectrumArgs& args) {
    const Graph g = read_graph(args.graph);
    const SpectralDecomposition dec = decompose(g);
    std::string csv = "index,eigenvalue\n";
    std::vector<double> values;
    for (std::size_t i = 0; i < dec.size(); ++i) {
        const double v = dec.eigenvalues(static_cast<Eigen::Index>(i));
        values.push_back(v);
        char buf[64];
        std::snprintf(buf, sizeof buf, "%zu,%.17g\n", i, v);
        csv += buf;
    }
    write_text(args.out, csv);
    emit({{"command", "spectrum"}, {"nodes", g.node_count()}, {"eigenvalues", values}, {"out", args.out}});
    return kOk;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Scattering-GCN toolkit: graph wavelets, scattering, hybrid networks"};
    app.require_subcommand(1);
    std::size_t threads = 1;
    app.add_option("--threads", threads, "Worker threads for sparse sweeps (results are reproducible per count)")
        ->check(CLI::Range(std::size_t{1}, std::size_t{256}));

    VerifyArgs verify;
    auto* verify_cmd = app.add_subcommand("verify-lemmas", "Check the oversmoothing lemmas and the Psi_3 table");
    verify_cmd->add_option("--lengths", verify.lengths, "Chained-cycle lengths for the hub/pass check, e.g. 6,8");
    verify_cmd->add_option("--tolerance", verify.tolerance, "Override every check's tolerance");
    verify_cmd->add_option("--seed", verify.seed, "Seed for the random sweep parameters");

    ScatterArgs scatter;
    auto* scatter_cmd = app.add_subcommand("scatter", "Apply a scattering path U_p to a signal");
    scatter_cmd->add_option("--graph", scatter.graph, "graph.txt")->required();
    scatter_cmd->add_option("--signal", scatter.signal, "Signal in features.txt format")->required();
    scatter_cmd->add_option("--path", scatter.path, "Scales innermost first, e.g. 3,2")->required();
    scatter_cmd->add_option("--out", scatter.out, "Output features.txt")->required();

    TrainArgs trainargs;
    auto* train_cmd = app.add_subcommand("train", "Train a model and write a checkpoint");
    train_cmd->add_option("--data-dir", trainargs.data_dir, "Dataset directory (overrides data_dir in the config)");
    train_cmd->add_option("--config", trainargs.config, "Run config JSON")->required();
    train_cmd->add_option("--out", trainargs.out, "Checkpoint path")->required();
    train_cmd->add_option("--metrics", trainargs.metrics, "Also write the metrics JSON here");
    train_cmd->add_option("--seed", trainargs.seed, "Override the config seed");

    EvalArgs evalargs;
    auto* eval_cmd = app.add_subcommand("eval", "Accuracy of a checkpoint on a split");
    eval_cmd->add_option("--data-dir", evalargs.data_dir, "Dataset directory")->required();
    eval_cmd->add_option("--model", evalargs.model, "Checkpoint path")->required();
    eval_cmd->add_option("--split", evalargs.split, "train, val or test")->check(CLI::IsMember({"train", "val", "test"}));

    AblateArgs ablate;
    auto* ablate_cmd = app.add_subcommand("ablate", "Retrain without individual channels");
    ablate_cmd->add_option("--data-dir", ablate.data_dir, "Dataset directory (overrides data_dir in the config)");
    ablate_cmd->add_option("--config", ablate.config, "Run config JSON")->required();
    ablate_cmd->add_option("--drop", ablate.drop, "Channel index, comma list, or 'all'")->required();
    ablate_cmd->add_option("--layer", ablate.layer, "Hybrid layer to ablate");
    ablate_cmd->add_option("--seeds", ablate.seeds, "Seeds per configuration");
    ablate_cmd->add_option("--csv", ablate.csv, "Write per-configuration means as CSV");

    SpectrumArgs spectrum;
    auto* spectrum_cmd = app.add_subcommand("spectrum", "Eigenvalues of the normalized Laplacian");
    spectrum_cmd->add_option("--graph", spectrum.graph, "graph.txt")->required();
    spectrum_cmd->add_option("--out", spectrum.out, "Output CSV")->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? kOk : kUsage;
    }

    try {
        set_worker_count(threads);
        if (*verify_cmd) return cmd_verify(verify);
        if (*scatter_cmd) return cmd_scatter(scatter);
        if (*train_cmd) return cmd_train(trainargs);
        if (*eval_cmd) return cmd_eval(evalargs);
        if (*ablate_cmd) return cmd_ablate(ablate);
        if (*spectrum_cmd) return cmd_spectrum(spectrum);
    } catch (const DivergenceError& e) {
        std::cerr << "error: " << e.what() << '\n';
        emit({{"error", "divergence"}, {"epoch", e.epoch()}, {"layer", e.layer()}, {"message", e.detail()}});
        return kCheckFailed;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kUsage;
    }
    return kUsage;
}
