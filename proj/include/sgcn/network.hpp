#pragma once

#include <cstddef>
#include <cstdint>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include <Eigen/Core>

#include "sgcn/graph.hpp"
#include "sgcn/operators.hpp"
#include "sgcn/scattering.hpp"

namespace sgcn {

/// One channel of a hybrid layer: either a GCN channel propagating with A^k
/// or a scattering channel applying U_p.
struct ChannelSpec {
    enum class Kind { GcnPower, Scattering };

    Kind kind = Kind::GcnPower;
    std::size_t power = 1;
    std::optional<ScatteringPath> path;
    std::size_t width = 1;

    static ChannelSpec gcn(std::size_t power, std::size_t width);
    static ChannelSpec scattering(ScatteringPath path, std::size_t width);

    /// "A^2", "Psi_1", "Psi_2|Psi_3|" (outermost wavelet first).
    std::string label() const;

    friend bool operator==(const ChannelSpec&, const ChannelSpec&) = default;
};

struct LayerSpec {
    std::vector<ChannelSpec> channels;
    /// Exponent of the |.|^q nonlinearity.
    int q = 4;

    std::size_t width() const noexcept;

    friend bool operator==(const LayerSpec&, const LayerSpec&) = default;
};

struct ModelSpec {
    std::vector<LayerSpec> layers;
    /// Residual convolution parameter of the output layer.
    double alpha = 0.0;
    std::size_t n_classes = 0;
    std::size_t input_dim = 0;

    /// Input feature count of hybrid layer l.
    std::size_t layer_input_dim(std::size_t l) const;
    /// Width of the concatenated output of the last hybrid layer.
    std::size_t concat_width() const;

    /// Throws std::invalid_argument when any structural invariant fails.
    void validate() const;

    friend bool operator==(const ModelSpec&, const ModelSpec&) = default;
};

struct DenseLayerParams {
    Eigen::MatrixXd theta; ///< in_dim x width
    Eigen::RowVectorXd bias;
};

struct ModelParams {
    /// layers[l][c] holds the weights of channel c in hybrid layer l.
    std::vector<std::vector<DenseLayerParams>> layers;
    DenseLayerParams residual; ///< concat_width x n_classes

    /// Visits every tensor as (data, size, is_weight), in a fixed order.
    template <typename F>
    void for_each_tensor(F&& f) { visit(*this, f); }
    template <typename F>
    void for_each_tensor(F&& f) const { visit(*this, f); }

    std::size_t parameter_count() const;
    /// FNV-1a over the raw parameter bytes.
    std::uint64_t fingerprint() const;

private:
    template <typename Self, typename F>
    static void visit(Self& self, F& f) {
        for (auto& layer : self.layers)
            for (auto& ch : layer) {
                f(ch.theta.data(), static_cast<std::size_t>(ch.theta.size()), true);
                f(ch.bias.data(), static_cast<std::size_t>(ch.bias.size()), false);
            }
        f(self.residual.theta.data(), static_cast<std::size_t>(self.residual.theta.size()), true);
        f(self.residual.bias.data(), static_cast<std::size_t>(self.residual.bias.size()), false);
    }
};

/// Same shapes as ModelParams.
using Gradients = ModelParams;

ModelParams zero_params(const ModelSpec& spec);

/// Glorot-uniform weights, zero biases; one RNG stream per tensor.
ModelParams init_params(const ModelSpec& spec, std::uint64_t seed);

/// Throws std::invalid_argument if params do not match spec or hold non-finite entries.
void check_params(const ModelSpec& spec, const ModelParams& params);

/// First-layer channel operators applied to the (fixed) input features.
/// Computed once and reused across training epochs.
struct PropagatedInput {
    std::vector<SignalMatrix> channels;
};

/// Intermediate activations recorded by a forward pass.
struct Tape {
    struct Layer {
        SignalMatrix input;                   ///< H^(l-1); empty for l = 0
        std::vector<SignalMatrix> propagated; ///< Op_c(H^(l-1)); empty for l = 0
        std::vector<SignalMatrix> pre;        ///< Op_c(H^(l-1)) Theta_c + B_c
        SignalMatrix output;                  ///< concatenated |pre|^q
    };
    std::shared_ptr<const PropagatedInput> input;
    std::vector<Layer> layers;
    SignalMatrix logits;
    std::uint64_t params_fingerprint = 0;
    const void* owner = nullptr;
};

/// Hybrid scattering/GCN network bound to one graph (which must outlive it).
class Network {
public:
    Network(ModelSpec spec, const Graph& g);

    const ModelSpec& spec() const noexcept { return spec_; }
    const Graph& graph() const noexcept { return *graph_; }

    /// Channel operators of hybrid layer 0 applied to X.
    std::shared_ptr<const PropagatedInput> propagate_input(const SignalMatrix& x) const;

    /// Throws DivergenceError on non-finite activations and
    /// std::invalid_argument on shape mismatches.
    Tape forward(const ModelParams& params, std::shared_ptr<const PropagatedInput> input) const;
    Tape forward(const ModelParams& params, const SignalMatrix& x) const;

    /// Exact gradient of loss_masked_ce(tape.logits, labels, mask). Throws
    /// std::invalid_argument for an empty mask or a tape recorded with other
    /// parameters or by another network.
    Gradients backward(const ModelParams& params, const Tape& tape, std::span<const int> labels,
                       std::span<const NodeId> mask) const;

private:
    std::vector<SignalMatrix> propagate(std::size_t layer, const SignalMatrix& h) const;

    ModelSpec spec_;
    const Graph* graph_;
    DiffusionPlan prop_;
    DiffusionPlan walk_;
    DiffusionPlan walk_t_;
    DiffusionPlan residual_;
    DiffusionPlan residual_t_;
};

/// Convenience: builds a Network and runs one forward pass.
SignalMatrix forward(const ModelSpec& spec, const ModelParams& params, const Graph& g, const SignalMatrix& x);

/// |z|^q and its derivative q |z|^(q-1) sign(z) (0 at z = 0).
double activation(double z, int q);
double activation_grad(double z, int q);

/// Mean softmax cross-entropy over the masked rows. Throws std::invalid_argument
/// for an empty mask or an unlabeled / out-of-range masked node.
double loss_masked_ce(const SignalMatrix& logits, std::span<const int> labels, std::span<const NodeId> mask);

/// d loss_masked_ce / d logits.
SignalMatrix loss_masked_ce_grad(const SignalMatrix& logits, std::span<const int> labels, std::span<const NodeId> mask);

/// Row argmax, ties to the lowest class index.
std::vector<int> predict(const SignalMatrix& logits);

/// Fraction of nodes in mask whose argmax matches the label. Empty mask gives 0.
double accuracy(const SignalMatrix& logits, std::span<const int> labels, std::span<const NodeId> mask);

/// Copy of spec without channel `channel` of hybrid layer `layer`.
/// Throws std::out_of_range for a bad index and std::invalid_argument when it
/// would leave the layer empty.
ModelSpec ablate_channel(const ModelSpec& spec, std::size_t channel, std::size_t layer = 0);

} // namespace sgcn
