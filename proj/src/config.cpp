#include "sgcn/config.hpp"

#include <algorithm>
#include <initializer_list>
#include <string_view>

#include "sgcn/error.hpp"
#include "text_format.hpp"

namespace sgcn {

using nlohmann::json;

namespace {

[[noreturn]] void fail(const std::string& source, const std::string& what) { throw ParseError(source, 0, what); }

void require_object(const json& j, const std::string& source, std::string_view where) {
    if (!j.is_object()) fail(source, std::string(where) + ": expected a JSON object");
}

void reject_unknown(const json& j, std::initializer_list<std::string_view> allowed, const std::string& source,
                    std::string_view where) {
    for (const auto& [key, value] : j.items())
        if (std::find(allowed.begin(), allowed.end(), key) == allowed.end())
            fail(source, "unknown key '" + key + "' in " + std::string(where));
}

double get_number(const json& j, const char* key, const std::string& source, std::string_view where) {
    const json& v = j.at(key);
    if (!v.is_number()) fail(source, std::string(where) + "." + key + ": expected a number");
    return v.get<double>();
}

std::uint64_t get_unsigned(const json& j, const char* key, const std::string& source, std::string_view where) {
    const json& v = j.at(key);
    if (!v.is_number_unsigned()) fail(source, std::string(where) + "." + key + ": expected a non-negative integer");
    return v.get<std::uint64_t>();
}

void check_schema(const json& doc, const std::string& source) {
    if (!doc.contains("schema")) fail(source, "missing \"schema\" field");
    if (doc.at("schema") != kSchema) fail(source, "unsupported schema " + doc.at("schema").dump() + " (expected \"sgcn/1\")");
}

ChannelSpec channel_from_json(const json& j, const std::string& source, const std::string& where) {
    require_object(j, source, where);
    reject_unknown(j, {"gcn", "scattering", "width"}, source, where);
    if (j.contains("gcn") == j.contains("scattering")) fail(source, where + ": exactly one of \"gcn\" or \"scattering\" required");
    if (!j.contains("width")) fail(source, where + ": missing \"width\"");
    const auto width = get_unsigned(j, "width", source, where);
    try {
        if (j.contains("gcn")) return ChannelSpec::gcn(get_unsigned(j, "gcn", source, where), width);
        const json& p = j.at("scattering");
        if (!p.is_array()) fail(source, where + ".scattering: expected an array of scales");
        std::vector<std::size_t> scales;
        for (const json& s : p) {
            if (!s.is_number_unsigned()) fail(source, where + ".scattering: scales must be non-negative integers");
            scales.push_back(s.get<std::size_t>());
        }
        return ChannelSpec::scattering(ScatteringPath(std::move(scales)), width);
    } catch (const std::invalid_argument& e) {
        fail(source, where + ": " + e.what());
    }
}

json channel_to_json(const ChannelSpec& c) {
    json j = json::object();
    if (c.kind == ChannelSpec::Kind::GcnPower)
        j["gcn"] = c.power;
    else
        j["scattering"] = c.path->scales();
    j["width"] = c.width;
    return j;
}

} // namespace

json model_spec_to_json(const ModelSpec& spec) {
    json layers = json::array();
    for (const auto& layer : spec.layers) {
        json channels = json::array();
        for (const auto& c : layer.channels) channels.push_back(channel_to_json(c));
        layers.push_back({{"q", layer.q}, {"channels", std::move(channels)}});
    }
    json j = {{"alpha", spec.alpha}, {"layers", std::move(layers)}};
    if (spec.input_dim) j["input_dim"] = spec.input_dim;
    if (spec.n_classes) j["n_classes"] = spec.n_classes;
    return j;
}

ModelSpec model_spec_from_json(const json& doc, const std::string& source) {
    require_object(doc, source, "model");
    ModelSpec spec;
    if (doc.contains("alpha")) spec.alpha = get_number(doc, "alpha", source, "model");
    if (doc.contains("input_dim")) spec.input_dim = get_unsigned(doc, "input_dim", source, "model");
    if (doc.contains("n_classes")) spec.n_classes = get_unsigned(doc, "n_classes", source, "model");
    if (!doc.contains("layers") || !doc.at("layers").is_array()) fail(source, "\"layers\" must be an array");
    std::size_t l = 0;
    for (const json& lj : doc.at("layers")) {
        const std::string where = "layers[" + std::to_string(l++) + "]";
        require_object(lj, source, where);
        reject_unknown(lj, {"q", "channels"}, source, where);
        LayerSpec layer;
        if (lj.contains("q")) {
            const json& q = lj.at("q");
            if (!q.is_number_integer() || q.get<std::int64_t>() < 1 || q.get<std::int64_t>() > 64) fail(source, where + ".q: expected an integer in [1, 64]");
            layer.q = q.get<int>();
        }
        if (!lj.contains("channels") || !lj.at("channels").is_array()) fail(source, where + ".channels must be an array");
        std::size_t c = 0;
        for (const json& cj : lj.at("channels"))
            layer.channels.push_back(channel_from_json(cj, source, where + ".channels[" + std::to_string(c++) + "]"));
        spec.layers.push_back(std::move(layer));
    }
    // Dimensions are bound later, so only check structure here.
    ModelSpec probe = spec;
    if (!probe.input_dim) probe.input_dim = 1;
    if (!probe.n_classes) probe.n_classes = 1;
    try {
        probe.validate();
    } catch (const std::invalid_argument& e) {
        fail(source, e.what());
    }
    return spec;
}

json train_config_to_json(const TrainConfig& c) {
    return {{"learning_rate", c.learning_rate}, {"beta1", c.beta1},       {"beta2", c.beta2},
            {"epsilon", c.epsilon},             {"weight_decay", c.weight_decay}, {"epochs", c.epochs},
            {"patience", c.patience},           {"seed", c.seed}};
}

TrainConfig train_config_from_json(const json& doc, const std::string& source) {
    require_object(doc, source, "train");
    reject_unknown(doc, {"learning_rate", "beta1", "beta2", "epsilon", "weight_decay", "epochs", "patience", "seed"}, source,
                   "train");
    TrainConfig c;
    if (doc.contains("learning_rate")) c.learning_rate = get_number(doc, "learning_rate", source, "train");
    if (doc.contains("beta1")) c.beta1 = get_number(doc, "beta1", source, "train");
    if (doc.contains("beta2")) c.beta2 = get_number(doc, "beta2", source, "train");
    if (doc.contains("epsilon")) c.epsilon = get_number(doc, "epsilon", source, "train");
    if (doc.contains("weight_decay")) c.weight_decay = get_number(doc, "weight_decay", source, "train");
    if (doc.contains("epochs")) c.epochs = get_unsigned(doc, "epochs", source, "train");
    if (doc.contains("patience")) c.patience = get_unsigned(doc, "patience", source, "train");
    if (doc.contains("seed")) c.seed = get_unsigned(doc, "seed", source, "train");
    try {
        c.validate();
    } catch (const std::invalid_argument& e) {
        fail(source, e.what());
    }
    return c;
}

RunConfig run_config_from_json(const json& doc, const std::string& source) {
    require_object(doc, source, "config");
    reject_unknown(doc, {"schema", "name", "alpha", "layers", "input_dim", "n_classes", "train", "data_dir"}, source, "config");
    check_schema(doc, source);
    RunConfig config;
    if (doc.contains("name")) {
        if (!doc.at("name").is_string()) fail(source, "name: expected a string");
        config.name = doc.at("name").get<std::string>();
    }
    config.model = model_spec_from_json(doc, source);
    if (doc.contains("train")) config.train = train_config_from_json(doc.at("train"), source);
    if (doc.contains("data_dir")) {
        if (!doc.at("data_dir").is_string()) fail(source, "data_dir: expected a string");
        config.data_dir = doc.at("data_dir").get<std::string>();
    }
    return config;
}

json read_json_file(const std::filesystem::path& file) {
    const std::string text = detail::read_file(file);
    try {
        return json::parse(text);
    } catch (const json::parse_error& e) {
        const auto upto = std::min<std::size_t>(e.byte, text.size());
        const auto line = 1 + static_cast<std::size_t>(std::count(text.begin(), text.begin() + upto, '\n'));
        throw ParseError(file.string(), line, "invalid JSON");
    }
}

RunConfig load_run_config(const std::filesystem::path& file) { return run_config_from_json(read_json_file(file), file.string()); }

json to_json(const RunConfig& config) {
    json j = model_spec_to_json(config.model);
    j["schema"] = kSchema;
    j["name"] = config.name;
    j["train"] = train_config_to_json(config.train);
    if (config.data_dir) j["data_dir"] = *config.data_dir;
    return j;
}

json metrics_to_json(const MetricsReport& report) {
    json curve = json::array();
    for (const auto& m : report.curve)
        curve.push_back({{"epoch", m.epoch},
                         {"train_loss", m.train_loss},
                         {"train_acc", m.train_acc},
                         {"val_loss", m.val_loss},
                         {"val_acc", m.val_acc},
                         {"test_acc", m.test_acc}});
    const EpochMetrics best = report.curve.empty() ? EpochMetrics{} : report.curve.at(report.best_epoch);
    return {{"schema", kSchema},
            {"kind", "metrics"},
            {"epoch", report.best_epoch},
            {"train_loss", best.train_loss},
            {"val_acc", report.best_val_acc},
            {"test_acc", report.test_acc},
            {"test_accuracy", report.test_acc},
            {"epochs_run", report.curve.empty() ? 0 : report.curve.size() - 1},
            {"early_stopped", report.early_stopped},
            {"curve", std::move(curve)}};
}

void bind_to_dataset(ModelSpec& spec, const Dataset& data) {
    spec.input_dim = static_cast<std::size_t>(data.features.cols());
    spec.n_classes = data.n_classes;
}

} // namespace sgcn
