#pragma once

#include "gacl/graph.hpp"
#include "gacl/matrix.hpp"

#include <cstdint>
#include <stdexcept>

namespace gacl {

enum class LossVariant { graphacl, smoothing, pre, uni, com };

struct LossConfig {
    double tau = 0.75;
    Index k = 10;  // negatives per anchor; 0 = every node is a negative
    bool include_self_as_negative = true;
    LossVariant variant = LossVariant::graphacl;
};

/// Signals a non-finite loss value (training divergence).
struct NumericalError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Row-major matrix of node indices (anchors x K sampled negatives).
struct IndexMatrix {
    Index rows = 0;
    Index cols = 0;
    std::vector<Index> data;

    IndexMatrix() = default;
    IndexMatrix(Index r, Index c) : rows(r), cols(c), data(static_cast<size_t>(r) * c, 0) {}

    Index at(Index r, Index c) const { return data[static_cast<size_t>(r) * cols + c]; }
    Index& at(Index r, Index c) { return data[static_cast<size_t>(r) * cols + c]; }
};

/// Uniform with replacement over [0, num_nodes), self included; deterministic
/// in the seed.
IndexMatrix sample_negatives(Index num_nodes, Index k, Index anchors, std::uint64_t seed);

/// Loss value plus gradients w.r.t. whichever dense inputs the variant uses.
/// Unused gradients stay empty. No loss produces a gradient for the target
/// representations U.
struct LossOutput {
    double value = 0.0;
    DenseMatrix grad_p;       // w.r.t. predictor output P
    DenseMatrix grad_v;       // w.r.t. online representations V
    DenseMatrix grad_anchor;  // smoothing: w.r.t. the anchor-side matrix
    DenseMatrix grad_other;   // smoothing: w.r.t. the neighbor-side matrix
};

/// Asymmetric contrastive loss: positives are (prediction, target-neighbor)
/// pairs, the denominator adds the online-vs-negative similarity mass.
/// negatives may be empty iff cfg.k == 0 (all-node negatives).
LossOutput loss_graphacl(const Graph& g, const DenseMatrix& p, const DenseMatrix& u,
                         const DenseMatrix& v, const IndexMatrix& negatives,
                         const LossConfig& cfg);

/// Symmetric one-hop smoothing loss: anchor and neighbor come from one
/// encoder; the negative mass uses the anchor-side matrix.
LossOutput loss_smoothing(const Graph& g, const DenseMatrix& v_anchor,
                          const DenseMatrix& v_other, const IndexMatrix& negatives,
                          const LossConfig& cfg);

/// Mean squared prediction error over one-hop pairs.
LossOutput loss_pre(const Graph& g, const DenseMatrix& p, const DenseMatrix& u);

/// Negative mean pairwise squared distance; the sampled estimate is rescaled
/// to the full double sum.
LossOutput loss_uni(const DenseMatrix& v, const IndexMatrix& negatives, const LossConfig& cfg);

/// loss_pre + loss_uni.
LossOutput loss_com(const Graph& g, const DenseMatrix& p, const DenseMatrix& u,
                    const DenseMatrix& v, const IndexMatrix& negatives, const LossConfig& cfg);

} // namespace gacl
