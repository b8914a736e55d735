#pragma once

#include "gacl/graph.hpp"
#include "gacl/matrix.hpp"

#include <cstdint>
#include <filesystem>
#include <vector>

namespace gacl {

/// Stacked GCN layer parameters. Layer rule: H' = act(A_hat·(H·W) + b) with
/// ELU on hidden layers, none on the last; the final output is row-normalized.
struct EncoderParams {
    std::vector<ParamTensor> weights;
    std::vector<ParamTensor> biases;

    int layers() const { return static_cast<int>(weights.size()); }
    Index output_dim() const { return weights.back().value.cols; }

    /// Glorot-uniform weights, zero biases, seeded.
    static EncoderParams glorot(Index input_dim, Index hidden_dim, Index output_dim,
                                int num_layers, std::uint64_t seed);

    void copy_values_from(const EncoderParams& other);
    std::vector<ParamTensor*> tensors();                // W1, b1, W2, b2, ...
    std::vector<const ParamTensor*> tensors() const;
};

enum class PredictorKind { mlp, linear, identity };

/// Predictor g mapping a representation toward its neighbors' target
/// representations. mlp: D -> D -> D with ELU between; linear: one affine
/// layer; identity: passes input through untouched (no parameters).
/// Outputs of mlp/linear are row-normalized.
struct PredictorParams {
    PredictorKind kind = PredictorKind::mlp;
    std::vector<ParamTensor> weights;
    std::vector<ParamTensor> biases;

    static PredictorParams make(PredictorKind kind, Index dim, std::uint64_t seed);

    std::vector<ParamTensor*> tensors();
    std::vector<const ParamTensor*> tensors() const;
};

struct AdamMoments {
    DenseMatrix m;
    DenseMatrix v;
};

/// Online encoder, EMA target encoder, predictor, and optimizer state.
/// The target is never optimized directly; its grad buffers stay zero.
struct ModelState {
    EncoderParams online;
    EncoderParams target;
    PredictorParams predictor;
    std::vector<AdamMoments> moments;  // aligned with trainable_tensors()
    std::int64_t step = 0;

    /// Tensors updated by the optimizer: online then predictor, declaration order.
    std::vector<ParamTensor*> trainable_tensors();
};

struct GcnForwardCache {
    const SparseMatrix* adj = nullptr;
    std::vector<DenseMatrix> layer_inputs;  // H_0 = X, H_1, ..., H_{L-1}
    std::vector<DenseMatrix> pre_acts;      // A_hat·(H·W) + b per layer
    RowNormalizeCache norm;                 // final row normalization
};

DenseMatrix gcn_forward(const SparseMatrix& adj, const DenseMatrix& x, const EncoderParams& params);
GcnForwardCache gcn_forward_cached(const SparseMatrix& adj, const DenseMatrix& x,
                                   const EncoderParams& params);
/// Accumulates parameter gradients; the gradient w.r.t. the input features is
/// not materialized (features are constants).
void gcn_backward(const GcnForwardCache& cache, EncoderParams& params,
                  const DenseMatrix& d_output);

struct PredictorForwardCache {
    const DenseMatrix* input = nullptr;
    std::vector<DenseMatrix> pre_acts;
    std::vector<DenseMatrix> layer_inputs;
    RowNormalizeCache norm;
    bool identity = false;
};

DenseMatrix predictor_forward(const DenseMatrix& v, const PredictorParams& params);
PredictorForwardCache predictor_forward_cached(const DenseMatrix& v, const PredictorParams& params);
/// Accumulates predictor gradients and returns the gradient w.r.t. the input.
DenseMatrix predictor_backward(const PredictorForwardCache& cache, PredictorParams& params,
                               const DenseMatrix& d_output);

/// Target-encoder pass: same math as gcn_forward with the target weights.
/// The result carries no backward path, so no gradient can reach the target.
DenseMatrix target_forward(const SparseMatrix& adj, const DenseMatrix& x, const ModelState& state);

/// target <- lambda * target + (1 - lambda) * online, elementwise.
void ema_update(ModelState& state, double lambda);

// Checkpoint: magic "GACLCKPT", u32 version, then every tensor of
// online, target, predictor (declaration order: W1, b1, W2, b2, ...) as
// u32 rows, u32 cols, row-major little-endian f64.
void write_checkpoint(const std::filesystem::path& path, const ModelState& state);
std::vector<DenseMatrix> read_checkpoint_tensors(const std::filesystem::path& path);

} // namespace gacl
