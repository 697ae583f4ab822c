#include "sgcn/checkpoint.hpp"

#include "sgcn/config.hpp"
#include "sgcn/error.hpp"
#include "text_format.hpp"

namespace sgcn {

using nlohmann::json;

namespace {

json matrix_to_json(const Eigen::MatrixXd& m) {
    json data = json::array();
    for (Eigen::Index i = 0; i < m.rows(); ++i)
        for (Eigen::Index j = 0; j < m.cols(); ++j) data.push_back(m(i, j));
    return {{"rows", m.rows()}, {"cols", m.cols()}, {"data", std::move(data)}};
}

json vector_to_json(const Eigen::RowVectorXd& v) {
    json data = json::array();
    for (Eigen::Index i = 0; i < v.size(); ++i) data.push_back(v(i));
    return data;
}

json dense_to_json(const DenseLayerParams& p) { return {{"theta", matrix_to_json(p.theta)}, {"bias", vector_to_json(p.bias)}}; }

double number(const json& v, const std::string& source, const std::string& where) {
    if (!v.is_number()) throw ParseError(source, 0, where + ": expected a number");
    return v.get<double>();
}

Eigen::MatrixXd matrix_from_json(const json& j, const std::string& source, const std::string& where) {
    if (!j.is_object() || !j.contains("rows") || !j.contains("cols") || !j.contains("data") || j.size() != 3)
        throw ParseError(source, 0, where + ": expected {rows, cols, data}");
    if (!j.at("rows").is_number_unsigned() || !j.at("cols").is_number_unsigned())
        throw ParseError(source, 0, where + ": rows and cols must be non-negative integers");
    const auto rows = j.at("rows").get<Eigen::Index>();
    const auto cols = j.at("cols").get<Eigen::Index>();
    const json& data = j.at("data");
    if (!data.is_array() || data.size() != static_cast<std::size_t>(rows * cols))
        throw ParseError(source, 0, where + ": data length does not match rows * cols");
    Eigen::MatrixXd m(rows, cols);
    std::size_t k = 0;
    for (Eigen::Index i = 0; i < rows; ++i)
        for (Eigen::Index c = 0; c < cols; ++c) m(i, c) = number(data[k++], source, where);
    return m;
}

Eigen::RowVectorXd vector_from_json(const json& j, const std::string& source, const std::string& where) {
    if (!j.is_array()) throw ParseError(source, 0, where + ": expected an array");
    Eigen::RowVectorXd v(static_cast<Eigen::Index>(j.size()));
    for (std::size_t i = 0; i < j.size(); ++i) v(static_cast<Eigen::Index>(i)) = number(j[i], source, where);
    return v;
}

DenseLayerParams dense_from_json(const json& j, const std::string& source, const std::string& where) {
    if (!j.is_object() || !j.contains("theta") || !j.contains("bias") || j.size() != 2)
        throw ParseError(source, 0, where + ": expected {theta, bias}");
    return {matrix_from_json(j.at("theta"), source, where + ".theta"), vector_from_json(j.at("bias"), source, where + ".bias")};
}

} // namespace

json checkpoint_to_json(const ModelSpec& spec, const ModelParams& params) {
    check_params(spec, params);
    json layers = json::array();
    for (const auto& layer : params.layers) {
        json channels = json::array();
        for (const auto& ch : layer) channels.push_back(dense_to_json(ch));
        layers.push_back(std::move(channels));
    }
    return {{"schema", kSchema},
            {"kind", "checkpoint"},
            {"model", model_spec_to_json(spec)},
            {"params", {{"layers", std::move(layers)}, {"residual", dense_to_json(params.residual)}}}};
}

Checkpoint checkpoint_from_json(const json& doc, const std::string& source) {
    if (!doc.is_object()) throw ParseError(source, 0, "checkpoint: expected a JSON object");
    for (const auto& [key, value] : doc.items())
        if (key != "schema" && key != "kind" && key != "model" && key != "params")
            throw ParseError(source, 0, "unknown key '" + key + "' in checkpoint");
    if (!doc.contains("schema") || doc.at("schema") != kSchema) throw ParseError(source, 0, "checkpoint: schema must be \"sgcn/1\"");
    if (!doc.contains("kind") || doc.at("kind") != "checkpoint") throw ParseError(source, 0, "not a checkpoint document");
    if (!doc.contains("model") || !doc.contains("params")) throw ParseError(source, 0, "checkpoint: missing model or params");

    const json& model = doc.at("model");
    if (model.is_object())
        for (const auto& [key, value] : model.items())
            if (key != "alpha" && key != "layers" && key != "input_dim" && key != "n_classes")
                throw ParseError(source, 0, "unknown key '" + key + "' in checkpoint model");
    Checkpoint out;
    out.spec = model_spec_from_json(model, source);

    const json& params = doc.at("params");
    if (!params.is_object() || !params.contains("layers") || !params.contains("residual") || !params.at("layers").is_array())
        throw ParseError(source, 0, "checkpoint params: expected {layers, residual}");
    std::size_t l = 0;
    for (const json& layer : params.at("layers")) {
        if (!layer.is_array()) throw ParseError(source, 0, "checkpoint params: each layer must be an array");
        auto& out_layer = out.params.layers.emplace_back();
        std::size_t c = 0;
        for (const json& ch : layer)
            out_layer.push_back(dense_from_json(ch, source, "params.layers[" + std::to_string(l) + "][" + std::to_string(c++) + "]"));
        ++l;
    }
    out.params.residual = dense_from_json(params.at("residual"), source, "params.residual");
    try {
        out.spec.validate();
        check_params(out.spec, out.params);
    } catch (const std::invalid_argument& e) {
        throw ParseError(source, 0, e.what());
    }
    return out;
}

void save_checkpoint(const ModelSpec& spec, const ModelParams& params, const std::filesystem::path& file) {
    detail::write_file(file, checkpoint_to_json(spec, params).dump(1) + "\n");
}

Checkpoint load_checkpoint(const std::filesystem::path& file) { return checkpoint_from_json(read_json_file(file), file.string()); }

} // namespace sgcn
