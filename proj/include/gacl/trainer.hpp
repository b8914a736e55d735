#pragma once

#include "gacl/encoder.hpp"
#include "gacl/graph.hpp"
#include "gacl/matrix.hpp"
#include "gacl/objectives.hpp"

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

namespace gacl {

struct TrainConfig {
    int epochs = 300;
    double lr = 0.001;
    double weight_decay = 0.0;
    double lambda = 0.99;  // EMA decay of the target encoder
    double tau = 0.75;
    Index neg_k = 10;      // negatives per anchor; 0 = all nodes
    bool include_self_as_negative = true;
    Index dim = 512;
    Index hidden_dim = 512;
    int encoder_layers = 2;
    PredictorKind predictor = PredictorKind::mlp;
    LossVariant loss = LossVariant::graphacl;
    std::uint64_t seed = 1;
    double adam_beta1 = 0.9;
    double adam_beta2 = 0.999;
    double adam_eps = 1e-8;

    LossConfig loss_config() const {
        return {tau, neg_k, include_self_as_negative, loss};
    }
};

void validate(const TrainConfig& cfg);

struct DivergenceError : std::runtime_error {
    int epoch;
    explicit DivergenceError(int at_epoch)
        : std::runtime_error("training diverged (non-finite loss) at epoch " + std::to_string(at_epoch)),
          epoch(at_epoch) {}
};

struct TrainResult {
    DenseMatrix embeddings;          // num_nodes x dim, row-normalized online output
    std::vector<double> loss_curve;  // one entry per epoch
    ModelState state;
    double seconds = 0.0;
};

/// One bias-corrected Adam update; weight decay is folded additively into the
/// gradient. step counts from 1.
void adam_step(std::span<ParamTensor* const> params, std::vector<AdamMoments>& moments,
               const TrainConfig& cfg, std::int64_t step);

ModelState init_model(Index input_dim, const TrainConfig& cfg);

/// Full-graph training loop: online forward, predictor, detached target
/// forward, fresh negatives per epoch, loss backward into online + predictor,
/// Adam, EMA. Deterministic in (graph, features, config).
TrainResult train(const Graph& g, const DenseMatrix& features, const TrainConfig& cfg);

} // namespace gacl
