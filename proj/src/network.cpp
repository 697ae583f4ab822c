#include "sgcn/network.hpp"

#include <algorithm>
#include <cmath>
#include <cstring>
#include <optional>
#include <stdexcept>
#include <string>

#include "sgcn/error.hpp"
#include "sgcn/rng.hpp"

namespace sgcn {

namespace {

void require(bool ok, const std::string& what) {
    if (!ok) throw std::invalid_argument(what);
}

bool all_finite(const SignalMatrix& m) { return m.allFinite(); }

void check_mask(const SignalMatrix& logits, std::span<const int> labels, std::span<const NodeId> mask) {
    require(!mask.empty(), "loss over an empty mask");
    require(labels.size() == static_cast<std::size_t>(logits.rows()), "labels do not match logits rows");
    for (NodeId i : mask) {
        require(i < labels.size(), "mask node " + std::to_string(i) + " out of range");
        require(labels[i] >= 0 && labels[i] < logits.cols(),
                "mask node " + std::to_string(i) + " has label " + std::to_string(labels[i]) + " outside [0, " +
                    std::to_string(logits.cols()) + ")");
    }
}

} // namespace

ChannelSpec ChannelSpec::gcn(std::size_t power, std::size_t width) {
    require(power >= 1, "GCN power must be >= 1");
    require(width >= 1, "channel width must be >= 1");
    ChannelSpec c;
    c.kind = Kind::GcnPower;
    c.power = power;
    c.width = width;
    return c;
}

ChannelSpec ChannelSpec::scattering(ScatteringPath path, std::size_t width) {
    require(width >= 1, "channel width must be >= 1");
    ChannelSpec c;
    c.kind = Kind::Scattering;
    c.power = 0;
    c.path = std::move(path);
    c.width = width;
    return c;
}

std::string ChannelSpec::label() const {
    if (kind == Kind::GcnPower) return "A^" + std::to_string(power);
    const auto& s = path->scales();
    std::string out = "Psi_" + std::to_string(s.back());
    for (std::size_t i = s.size() - 1; i-- > 0;) out += "|Psi_" + std::to_string(s[i]);
    out.append(s.size() - 1, '|');
    return out;
}

std::size_t LayerSpec::width() const noexcept {
    std::size_t w = 0;
    for (const auto& c : channels) w += c.width;
    return w;
}

std::size_t ModelSpec::layer_input_dim(std::size_t l) const {
    if (l >= layers.size()) throw std::out_of_range("layer index out of range");
    return l == 0 ? input_dim : layers[l - 1].width();
}

std::size_t ModelSpec::concat_width() const { return layers.empty() ? 0 : layers.back().width(); }

void ModelSpec::validate() const {
    require(!layers.empty(), "model needs at least one hybrid layer");
    require(input_dim >= 1, "model input_dim must be >= 1");
    require(n_classes >= 1, "model n_classes must be >= 1");
    require(std::isfinite(alpha) && alpha >= 0.0, "residual alpha must be finite and >= 0");
    for (std::size_t l = 0; l < layers.size(); ++l) {
        const auto& layer = layers[l];
        const std::string where = "layer " + std::to_string(l);
        require(!layer.channels.empty(), where + " has no channels");
        require(layer.q >= 1, where + ": nonlinearity exponent q must be >= 1");
        for (const auto& c : layer.channels) {
            require(c.width >= 1, where + ": channel width must be >= 1");
            if (c.kind == ChannelSpec::Kind::GcnPower)
                require(c.power >= 1, where + ": GCN power must be >= 1");
            else
                require(c.path.has_value(), where + ": scattering channel without a path");
        }
    }
}

std::size_t ModelParams::parameter_count() const {
    std::size_t total = 0;
    for_each_tensor([&](const double*, std::size_t size, bool) { total += size; });
    return total;
}

std::uint64_t ModelParams::fingerprint() const {
    std::uint64_t h = 0xCBF29CE484222325ULL;
    for_each_tensor([&](const double* data, std::size_t size, bool) {
        const auto* bytes = reinterpret_cast<const unsigned char*>(data);
        for (std::size_t i = 0; i < size * sizeof(double); ++i) {
            h ^= bytes[i];
            h *= 0x100000001B3ULL;
        }
    });
    return h;
}

ModelParams zero_params(const ModelSpec& spec) {
    spec.validate();
    ModelParams p;
    for (std::size_t l = 0; l < spec.layers.size(); ++l) {
        const auto in = static_cast<Eigen::Index>(spec.layer_input_dim(l));
        auto& layer = p.layers.emplace_back();
        for (const auto& c : spec.layers[l].channels) {
            const auto w = static_cast<Eigen::Index>(c.width);
            layer.push_back({Eigen::MatrixXd::Zero(in, w), Eigen::RowVectorXd::Zero(w)});
        }
    }
    const auto cw = static_cast<Eigen::Index>(spec.concat_width());
    const auto nc = static_cast<Eigen::Index>(spec.n_classes);
    p.residual = {Eigen::MatrixXd::Zero(cw, nc), Eigen::RowVectorXd::Zero(nc)};
    return p;
}

ModelParams init_params(const ModelSpec& spec, std::uint64_t seed) {
    ModelParams p = zero_params(spec);
    const CounterRng root(seed, 0x5EED);
    std::uint64_t stream = 0;
    auto glorot = [&](Eigen::MatrixXd& theta) {
        CounterRng rng = root.split(stream++);
        const double limit = std::sqrt(6.0 / static_cast<double>(theta.rows() + theta.cols()));
        for (Eigen::Index i = 0; i < theta.size(); ++i) theta.data()[i] = rng.uniform(-limit, limit);
    };
    for (auto& layer : p.layers)
        for (auto& ch : layer) glorot(ch.theta);
    glorot(p.residual.theta);
    return p;
}

void check_params(const ModelSpec& spec, const ModelParams& params) {
    require(params.layers.size() == spec.layers.size(), "parameter layer count does not match spec");
    auto check = [&](const DenseLayerParams& d, std::size_t rows, std::size_t cols, const std::string& where) {
        require(static_cast<std::size_t>(d.theta.rows()) == rows && static_cast<std::size_t>(d.theta.cols()) == cols,
                where + ": weight shape mismatch");
        require(static_cast<std::size_t>(d.bias.size()) == cols, where + ": bias shape mismatch");
        require(d.theta.allFinite() && d.bias.allFinite(), where + ": non-finite parameter");
    };
    for (std::size_t l = 0; l < spec.layers.size(); ++l) {
        require(params.layers[l].size() == spec.layers[l].channels.size(), "parameter channel count does not match spec");
        for (std::size_t c = 0; c < spec.layers[l].channels.size(); ++c)
            check(params.layers[l][c], spec.layer_input_dim(l), spec.layers[l].channels[c].width,
                  "layer " + std::to_string(l) + " channel " + std::to_string(c));
    }
    check(params.residual, spec.concat_width(), spec.n_classes, "residual layer");
}

double activation(double z, int q) {
    const double a = std::abs(z);
    double r = a;
    for (int i = 1; i < q; ++i) r *= a;
    return r;
}

double activation_grad(double z, int q) {
    if (z == 0.0) return 0.0;
    const double a = std::abs(z);
    double r = static_cast<double>(q);
    for (int i = 1; i < q; ++i) r *= a;
    return z > 0.0 ? r : -r;
}

Network::Network(ModelSpec spec, const Graph& g)
    : spec_(std::move(spec)),
      graph_(&g),
      prop_(renorm_propagation(g)),
      walk_(lazy_walk(g)),
      walk_t_(walk_.transposed()),
      residual_(residual_plan(g, spec_.alpha)),
      residual_t_(residual_.transposed()) {
    spec_.validate();
}

std::vector<SignalMatrix> Network::propagate(std::size_t layer, const SignalMatrix& h) const {
    std::optional<DiffusionCache> prop_cache;
    std::optional<DiffusionCache> walk_cache;
    std::vector<SignalMatrix> out;
    out.reserve(spec_.layers[layer].channels.size());
    for (const auto& c : spec_.layers[layer].channels) {
        if (c.kind == ChannelSpec::Kind::GcnPower) {
            if (!prop_cache) prop_cache.emplace(prop_, h);
            out.push_back(prop_cache->power(c.power));
        } else {
            if (!walk_cache) walk_cache.emplace(walk_, h);
            const auto& scales = c.path->scales();
            SignalMatrix cur = apply_wavelet(*walk_cache, scales[0]);
            for (std::size_t i = 1; i < scales.size(); ++i) cur = apply_wavelet(walk_, scales[i], cur.cwiseAbs());
            out.push_back(std::move(cur));
        }
    }
    return out;
}

std::shared_ptr<const PropagatedInput> Network::propagate_input(const SignalMatrix& x) const {
    require(static_cast<std::size_t>(x.rows()) == graph_->node_count(), "input features do not match graph size");
    require(static_cast<std::size_t>(x.cols()) == spec_.input_dim,
            "input has " + std::to_string(x.cols()) + " features, model expects " + std::to_string(spec_.input_dim));
    auto in = std::make_shared<PropagatedInput>();
    in->channels = propagate(0, x);
    return in;
}

Tape Network::forward(const ModelParams& params, const SignalMatrix& x) const {
    return forward(params, propagate_input(x));
}

Tape Network::forward(const ModelParams& params, std::shared_ptr<const PropagatedInput> input) const {
    check_params(spec_, params);
    require(input && input->channels.size() == spec_.layers[0].channels.size(), "propagated input does not match model");

    Tape tape;
    tape.input = std::move(input);
    tape.owner = this;
    tape.params_fingerprint = params.fingerprint();
    const auto n = static_cast<Eigen::Index>(graph_->node_count());

    for (std::size_t l = 0; l < spec_.layers.size(); ++l) {
        const auto& layer_spec = spec_.layers[l];
        Tape::Layer& rec = tape.layers.emplace_back();
        if (l > 0) {
            rec.input = tape.layers[l - 1].output;
            rec.propagated = propagate(l, rec.input);
        }
        const std::vector<SignalMatrix>& props = l == 0 ? tape.input->channels : rec.propagated;

        rec.output.resize(n, static_cast<Eigen::Index>(layer_spec.width()));
        Eigen::Index offset = 0;
        for (std::size_t c = 0; c < layer_spec.channels.size(); ++c) {
            const auto& p = params.layers[l][c];
            require(props[c].rows() == n && props[c].cols() == p.theta.rows(), "propagated input shape mismatch");
            SignalMatrix z = props[c] * p.theta;
            z.rowwise() += p.bias;
            const auto w = z.cols();
            rec.output.middleCols(offset, w) = z.unaryExpr([q = layer_spec.q](double v) { return activation(v, q); });
            rec.pre.push_back(std::move(z));
            offset += w;
        }
        if (!all_finite(rec.output)) throw DivergenceError(0, l, "non-finite activation in hybrid layer");
    }

    const SignalMatrix mixed = tape.layers.back().output * params.residual.theta;
    tape.logits = residual_.apply(mixed);
    tape.logits.rowwise() += params.residual.bias;
    if (!all_finite(tape.logits)) throw DivergenceError(0, spec_.layers.size(), "non-finite logits");
    return tape;
}

Gradients Network::backward(const ModelParams& params, const Tape& tape, std::span<const int> labels,
                            std::span<const NodeId> mask) const {
    require(tape.owner == this, "tape was recorded by a different network");
    require(tape.params_fingerprint == params.fingerprint(), "stale tape: parameters changed since the forward pass");

    Gradients grads = zero_params(spec_);
    const SignalMatrix dlogits = loss_masked_ce_grad(tape.logits, labels, mask);

    grads.residual.bias = dlogits.colwise().sum();
    const SignalMatrix dmixed = residual_t_.apply(dlogits);
    const SignalMatrix& last = tape.layers.back().output;
    grads.residual.theta = last.transpose() * dmixed;
    SignalMatrix dh = dmixed * params.residual.theta.transpose();

    for (std::size_t l = spec_.layers.size(); l-- > 0;) {
        const auto& layer_spec = spec_.layers[l];
        const Tape::Layer& rec = tape.layers[l];
        const std::vector<SignalMatrix>& props = l == 0 ? tape.input->channels : rec.propagated;
        SignalMatrix dprev;
        if (l > 0) dprev = SignalMatrix::Zero(rec.input.rows(), rec.input.cols());

        Eigen::Index offset = 0;
        for (std::size_t c = 0; c < layer_spec.channels.size(); ++c) {
            const auto& ch = layer_spec.channels[c];
            const SignalMatrix& z = rec.pre[c];
            const auto w = z.cols();
            const SignalMatrix dz = dh.middleCols(offset, w).cwiseProduct(
                z.unaryExpr([q = layer_spec.q](double v) { return activation_grad(v, q); }));
            offset += w;

            grads.layers[l][c].theta = props[c].transpose() * dz;
            grads.layers[l][c].bias = dz.colwise().sum();
            if (l == 0) continue;

            const SignalMatrix dprop = dz * params.layers[l][c].theta.transpose();
            if (ch.kind == ChannelSpec::Kind::GcnPower)
                dprev += apply_power(prop_, ch.power, dprop); // A is symmetric
            else
                dprev += scatter_node_vjp(walk_, walk_t_, *ch.path, rec.input, dprop);
        }
        if (l > 0) dh = std::move(dprev);
    }
    return grads;
}

SignalMatrix forward(const ModelSpec& spec, const ModelParams& params, const Graph& g, const SignalMatrix& x) {
    const Network net(spec, g);
    return net.forward(params, x).logits;
}

double loss_masked_ce(const SignalMatrix& logits, std::span<const int> labels, std::span<const NodeId> mask) {
    check_mask(logits, labels, mask);
    double total = 0.0;
    for (NodeId i : mask) {
        const auto row = logits.row(i);
        const double m = row.maxCoeff();
        const double lse = m + std::log((row.array() - m).exp().sum());
        total += lse - row(labels[i]);
    }
    return total / static_cast<double>(mask.size());
}

SignalMatrix loss_masked_ce_grad(const SignalMatrix& logits, std::span<const int> labels, std::span<const NodeId> mask) {
    check_mask(logits, labels, mask);
    SignalMatrix grad = SignalMatrix::Zero(logits.rows(), logits.cols());
    const double scale = 1.0 / static_cast<double>(mask.size());
    for (NodeId i : mask) {
        const auto row = logits.row(i);
        const Eigen::RowVectorXd e = (row.array() - row.maxCoeff()).exp();
        grad.row(i) += (scale / e.sum()) * e;
        grad(i, labels[i]) -= scale;
    }
    return grad;
}

std::vector<int> predict(const SignalMatrix& logits) {
    std::vector<int> out(static_cast<std::size_t>(logits.rows()));
    for (Eigen::Index i = 0; i < logits.rows(); ++i) {
        Eigen::Index best = 0;
        for (Eigen::Index c = 1; c < logits.cols(); ++c)
            if (logits(i, c) > logits(i, best)) best = c;
        out[static_cast<std::size_t>(i)] = static_cast<int>(best);
    }
    return out;
}

double accuracy(const SignalMatrix& logits, std::span<const int> labels, std::span<const NodeId> mask) {
    if (mask.empty()) return 0.0;
    const std::vector<int> pred = predict(logits);
    std::size_t hits = 0;
    for (NodeId i : mask) hits += pred.at(i) == labels[i];
    return static_cast<double>(hits) / static_cast<double>(mask.size());
}

ModelSpec ablate_channel(const ModelSpec& spec, std::size_t channel, std::size_t layer) {
    if (layer >= spec.layers.size()) throw std::out_of_range("ablate_channel: layer " + std::to_string(layer) + " out of range");
    const auto& channels = spec.layers[layer].channels;
    if (channel >= channels.size())
        throw std::out_of_range("ablate_channel: channel " + std::to_string(channel) + " out of range (layer has " +
                                std::to_string(channels.size()) + ")");
    require(channels.size() > 1, "ablate_channel: cannot remove the last channel of a layer");
    ModelSpec out = spec;
    out.layers[layer].channels.erase(out.layers[layer].channels.begin() + static_cast<std::ptrdiff_t>(channel));
    return out;
}

} // namespace sgcn
