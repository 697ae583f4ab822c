#include "sgcn/trainer.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

#include "sgcn/error.hpp"

namespace sgcn {

void TrainConfig::validate() const {
    auto bad = [](const std::string& what) { throw std::invalid_argument("train config: " + what); };
    if (!(learning_rate > 0) || !std::isfinite(learning_rate)) bad("learning_rate must be positive");
    if (!(beta1 >= 0 && beta1 < 1)) bad("beta1 must lie in [0, 1)");
    if (!(beta2 >= 0 && beta2 < 1)) bad("beta2 must lie in [0, 1)");
    if (!(epsilon > 0) || !std::isfinite(epsilon)) bad("epsilon must be positive");
    if (!(weight_decay >= 0) || !std::isfinite(weight_decay)) bad("weight_decay must be non-negative");
    if (patience == 0) bad("patience must be at least 1");
}

namespace {

void check_compatible(const ModelSpec& spec, const Dataset& data) {
    if (spec.input_dim != static_cast<std::size_t>(data.features.cols()))
        throw std::invalid_argument("model input_dim " + std::to_string(spec.input_dim) + " does not match " +
                                    std::to_string(data.features.cols()) + " dataset features");
    if (spec.n_classes != data.n_classes)
        throw std::invalid_argument("model n_classes " + std::to_string(spec.n_classes) + " does not match " +
                                    std::to_string(data.n_classes) + " dataset classes");
}

class Adam {
public:
    Adam(const ModelSpec& spec, const TrainConfig& cfg) : cfg_(cfg), m_(zero_params(spec)), v_(zero_params(spec)) {}

    void step(ModelParams& params, const Gradients& grads) {
        ++t_;
        const double c1 = 1.0 - std::pow(cfg_.beta1, static_cast<double>(t_));
        const double c2 = 1.0 - std::pow(cfg_.beta2, static_cast<double>(t_));

        // The four structures share one shape, so their tensors line up by visit order.
        std::vector<std::pair<const double*, std::size_t>> g;
        grads.for_each_tensor([&](const double* d, std::size_t n, bool) { g.emplace_back(d, n); });
        std::vector<double*> m, v;
        m_.for_each_tensor([&](double* d, std::size_t, bool) { m.push_back(d); });
        v_.for_each_tensor([&](double* d, std::size_t, bool) { v.push_back(d); });

        std::size_t k = 0;
        params.for_each_tensor([&](double* p, std::size_t n, bool is_weight) {
            const double* gk = g[k].first;
            double* mk = m[k];
            double* vk = v[k];
            const double decay = is_weight ? cfg_.weight_decay : 0.0;
            for (std::size_t i = 0; i < n; ++i) {
                const double gi = gk[i] + decay * p[i];
                mk[i] = cfg_.beta1 * mk[i] + (1.0 - cfg_.beta1) * gi;
                vk[i] = cfg_.beta2 * vk[i] + (1.0 - cfg_.beta2) * gi * gi;
                p[i] -= cfg_.learning_rate * (mk[i] / c1) / (std::sqrt(vk[i] / c2) + cfg_.epsilon);
            }
            ++k;
        });
    }

private:
    TrainConfig cfg_;
    ModelParams m_;
    ModelParams v_;
    std::size_t t_ = 0;
};

} // namespace

TrainResult train(const ModelSpec& spec, const Dataset& data, const TrainConfig& config, const EpochObserver& observer) {
    spec.validate();
    config.validate();
    data.validate();
    check_compatible(spec, data);
    if (data.train.empty()) throw std::invalid_argument("training split is empty");

    const Network net(spec, data.graph);
    const auto input = net.propagate_input(data.features);
    const bool has_val = !data.val.empty();

    ModelParams params = init_params(spec, config.seed);
    Adam adam(spec, config);

    TrainResult result;
    MetricsReport& report = result.report;
    double best_loss = 0;

    for (std::size_t epoch = 0;; ++epoch) {
        Tape tape;
        try {
            tape = net.forward(params, input);
        } catch (const DivergenceError& e) {
            throw DivergenceError(epoch, e.layer(), e.detail());
        }

        EpochMetrics m;
        m.epoch = epoch;
        m.train_loss = loss_masked_ce(tape.logits, data.labels, data.train);
        if (!std::isfinite(m.train_loss)) throw DivergenceError(epoch, spec.layers.size(), "non-finite training loss");
        m.train_acc = accuracy(tape.logits, data.labels, data.train);
        m.val_loss = has_val ? loss_masked_ce(tape.logits, data.labels, data.val) : m.train_loss;
        m.val_acc = has_val ? accuracy(tape.logits, data.labels, data.val) : m.train_acc;
        m.test_acc = accuracy(tape.logits, data.labels, data.test);
        report.curve.push_back(m);
        if (observer) observer(m);

        if (epoch == 0 || m.val_acc > report.best_val_acc || (m.val_acc == report.best_val_acc && m.val_loss < best_loss)) {
            report.best_epoch = epoch;
            report.best_val_acc = m.val_acc;
            report.test_acc = m.test_acc;
            best_loss = m.val_loss;
            result.params = params;
        }
        if (epoch == config.epochs) break;
        if (epoch - report.best_epoch >= config.patience) {
            report.early_stopped = true;
            break;
        }

        adam.step(params, net.backward(params, tape, data.labels, data.train));
    }
    return result;
}

double evaluate(const ModelSpec& spec, const ModelParams& params, const Dataset& data, std::string_view split) {
    const auto nodes = data.split(split);
    check_compatible(spec, data);
    return accuracy(forward(spec, params, data.graph, data.features), data.labels, nodes);
}

} // namespace sgcn
