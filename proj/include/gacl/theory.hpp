#pragma once

#include "gacl/encoder.hpp"
#include "gacl/graph.hpp"
#include "gacl/matrix.hpp"
#include "gacl/objectives.hpp"

#include <span>
#include <string>
#include <vector>

namespace gacl {

/// Exact lower bound on the contrastive loss obtained by dropping the
/// positive exponential from the log denominator:
/// bound = mean_v mean_u [ -pᵀu/tau + log sum_neg exp(vᵀv_-/tau) ].
struct BoundCheck {
    double loss = 0.0;
    double bound = 0.0;
    bool pass = false;  // loss >= bound - 1e-9
};

BoundCheck check_logsum_bound(const Graph& g, const DenseMatrix& p, const DenseMatrix& u,
                              const DenseMatrix& v, const IndexMatrix& negatives,
                              const LossConfig& cfg);

/// Jensen step: per anchor, log((1/n)·sum exp(x_j)) >= (1/n)·sum x_j with
/// x_j = vᵀv_j/tau. lhs/rhs are anchor means; pass requires every anchor to
/// satisfy the inequality with slack >= -1e-9.
struct JensenCheck {
    double lhs = 0.0;
    double rhs = 0.0;
    double min_slack = 0.0;
    bool pass = false;
};

JensenCheck check_jensen_bound(const DenseMatrix& v, const IndexMatrix& negatives,
                               const LossConfig& cfg);

/// Mean squared distance between two-hop neighbor representations,
/// per-node averaged; nodes with no two-hop neighbors are skipped.
double two_hop_alignment(const DenseMatrix& embeddings, const Graph& g);

/// Bi-Lipschitz constant L = 1/sigma_min(W)^2 of a linear predictor,
/// sigma_min obtained by inverse power iteration on WᵀW. Throws for
/// non-linear predictors and for singular W (sigma_min < 1e-10).
double estimate_bilipschitz(const PredictorParams& predictor);

struct Theorem3Terms {
    double loss_term = 0.0;       // 4L·loss
    double monophily_term = 0.0;  // 1 - h2
    double bound_value = 0.0;     // 4M²(4L·loss + (1 - h2)), additive constant unknown
    int num_classes = 0;
};

Theorem3Terms theorem3_report(double loss, double bilipschitz, double two_hop_homophily,
                              int num_classes);

/// Error rate of the classifier whose class rows are the class-mean
/// embeddings (argmax of mean-embedding dot products).
double mean_classifier_error(const DenseMatrix& embeddings, std::span<const int> labels,
                             int num_classes);

struct TheoryReport {
    double loss_value = 0.0;
    double bound_a1 = 0.0;
    double bound_jensen = 0.0;
    double two_hop_alignment = 0.0;
    double bilipschitz = 0.0;  // 0 when not estimable (non-linear predictor)
    Theorem3Terms theorem3;
    std::vector<std::string> violations;
};

} // namespace gacl
