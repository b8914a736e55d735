#include "gacl/trainer.hpp"

#include "gacl/rng.hpp"

#include <chrono>
#include <cmath>
#include <stdexcept>

namespace gacl {

void validate(const TrainConfig& cfg) {
    if (cfg.epochs < 1) throw std::invalid_argument("train: epochs must be >= 1");
    if (cfg.lr <= 0.0) throw std::invalid_argument("train: lr must be > 0");
    if (cfg.lambda < 0.0 || cfg.lambda > 1.0) throw std::invalid_argument("train: lambda outside [0, 1]");
    if (cfg.tau <= 0.0) throw std::invalid_argument("train: tau must be > 0");
    if (cfg.weight_decay < 0.0) throw std::invalid_argument("train: weight_decay must be >= 0");
    if (cfg.dim == 0 || cfg.hidden_dim == 0) throw std::invalid_argument("train: dims must be >= 1");
    if (cfg.encoder_layers < 1) throw std::invalid_argument("train: encoder_layers must be >= 1");
}

void adam_step(std::span<ParamTensor* const> params, std::vector<AdamMoments>& moments,
               const TrainConfig& cfg, std::int64_t step) {
    if (moments.size() != params.size()) throw std::invalid_argument("adam_step: moment buffer mismatch");
    const double bc1 = 1.0 - std::pow(cfg.adam_beta1, static_cast<double>(step));
    const double bc2 = 1.0 - std::pow(cfg.adam_beta2, static_cast<double>(step));
    for (size_t t = 0; t < params.size(); ++t) {
        ParamTensor& p = *params[t];
        AdamMoments& mom = moments[t];
        for (size_t i = 0; i < p.value.data.size(); ++i) {
            const double g = p.grad.data[i] + cfg.weight_decay * p.value.data[i];
            if (!std::isfinite(g)) throw NumericalError("adam_step: non-finite gradient");
            double& m = mom.m.data[i];
            double& v = mom.v.data[i];
            m = cfg.adam_beta1 * m + (1.0 - cfg.adam_beta1) * g;
            v = cfg.adam_beta2 * v + (1.0 - cfg.adam_beta2) * g * g;
            const double m_hat = m / bc1;
            const double v_hat = v / bc2;
            p.value.data[i] -= cfg.lr * m_hat / (std::sqrt(v_hat) + cfg.adam_eps);
        }
    }
}

ModelState init_model(Index input_dim, const TrainConfig& cfg) {
    ModelState state;
    state.online = EncoderParams::glorot(input_dim, cfg.hidden_dim, cfg.dim, cfg.encoder_layers,
                                         mix_seed(cfg.seed, 0xE0C0DE));
    state.target = EncoderParams::glorot(input_dim, cfg.hidden_dim, cfg.dim, cfg.encoder_layers,
                                         mix_seed(cfg.seed, 0xE0C0DE));
    state.target.copy_values_from(state.online);
    state.predictor = PredictorParams::make(cfg.predictor, cfg.dim, mix_seed(cfg.seed, 0xF1));
    for (ParamTensor* t : state.trainable_tensors()) {
        state.moments.push_back({DenseMatrix(t->value.rows, t->value.cols),
                                 DenseMatrix(t->value.rows, t->value.cols)});
    }
    return state;
}

namespace {

// Forward + loss + backward for one epoch; accumulates gradients into the
// online encoder and predictor.
double training_step(const Graph& g, const SparseMatrix& adj, const DenseMatrix& x,
                     ModelState& state, const TrainConfig& cfg, const IndexMatrix& negatives) {
    const LossConfig lc = cfg.loss_config();

    GcnForwardCache online = gcn_forward_cached(adj, x, state.online);
    const DenseMatrix& v = online.norm.output;

    if (cfg.loss == LossVariant::smoothing) {
        LossOutput loss = loss_smoothing(g, v, v, negatives, lc);
        add_inplace(loss.grad_anchor, loss.grad_other);
        gcn_backward(online, state.online, loss.grad_anchor);
        return loss.value;
    }
    if (cfg.loss == LossVariant::uni) {
        LossOutput loss = loss_uni(v, negatives, lc);
        gcn_backward(online, state.online, loss.grad_v);
        return loss.value;
    }

    PredictorForwardCache pred = predictor_forward_cached(v, state.predictor);
    const DenseMatrix& p = pred.norm.output;
    DenseMatrix u = target_forward(adj, x, state);

    LossOutput loss;
    switch (cfg.loss) {
        case LossVariant::graphacl: loss = loss_graphacl(g, p, u, v, negatives, lc); break;
        case LossVariant::pre: loss = loss_pre(g, p, u); break;
        case LossVariant::com: loss = loss_com(g, p, u, v, negatives, lc); break;
        default: throw std::invalid_argument("train: unknown loss variant");
    }

    DenseMatrix d_v = predictor_backward(pred, state.predictor, loss.grad_p);
    if (!loss.grad_v.empty()) add_inplace(d_v, loss.grad_v);
    gcn_backward(online, state.online, d_v);
    return loss.value;
}

} // namespace

TrainResult train(const Graph& g, const DenseMatrix& features, const TrainConfig& cfg) {
    validate(cfg);
    if (features.rows != g.num_nodes) {
        throw std::invalid_argument("train: features.rows != num_nodes");
    }
    const auto t0 = std::chrono::steady_clock::now();

    const SparseMatrix adj = normalized_adjacency(g);
    TrainResult result;
    result.state = init_model(features.cols, cfg);
    result.loss_curve.reserve(cfg.epochs);

    std::vector<ParamTensor*> trainable = result.state.trainable_tensors();
    for (int epoch = 0; epoch < cfg.epochs; ++epoch) {
        for (ParamTensor* t : trainable) t->zero_grad();
        IndexMatrix negatives;
        if (cfg.neg_k > 0) {
            negatives = sample_negatives(g.num_nodes, cfg.neg_k, g.num_nodes,
                                         mix_seed(cfg.seed, static_cast<std::uint64_t>(epoch)));
        }
        double value = 0.0;
        try {
            value = training_step(g, adj, features, result.state, cfg, negatives);
        } catch (const NumericalError&) {
            throw DivergenceError(epoch);
        }
        if (!std::isfinite(value)) throw DivergenceError(epoch);
        result.state.step += 1;
        adam_step(trainable, result.state.moments, cfg, result.state.step);
        ema_update(result.state, cfg.lambda);
        result.loss_curve.push_back(value);
    }

    result.embeddings = gcn_forward(adj, features, result.state.online);
    result.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    return result;
}

} // namespace gacl
