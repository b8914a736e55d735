#include "gacl/theory.hpp"

#include <Eigen/Dense>

#include <cmath>
#include <limits>
#include <stdexcept>

namespace gacl {

namespace {

constexpr double kSlack = 1e-9;

// Per-anchor negative-similarity sums; mirrors the loss-side accumulation
// order (ascending negative index).
std::vector<double> negative_exp_sums(const DenseMatrix& v, const IndexMatrix& negatives,
                                      const LossConfig& cfg) {
    const Index n = v.rows;
    std::vector<double> sums(n, 0.0);
    for (Index i = 0; i < n; ++i) {
        double s = 0.0;
        if (cfg.k == 0) {
            for (Index j = 0; j < n; ++j) {
                if (!cfg.include_self_as_negative && j == i) continue;
                s += std::exp(dot_rows(v, i, v, j) / cfg.tau);
            }
        } else {
            for (Index c = 0; c < cfg.k; ++c) {
                const Index j = negatives.at(i, c);
                if (!cfg.include_self_as_negative && j == i) continue;
                s += std::exp(dot_rows(v, i, v, j) / cfg.tau);
            }
        }
        sums[i] = s;
    }
    return sums;
}

} // namespace

BoundCheck check_logsum_bound(const Graph& g, const DenseMatrix& p, const DenseMatrix& u,
                              const DenseMatrix& v, const IndexMatrix& negatives,
                              const LossConfig& cfg) {
    BoundCheck out;
    out.loss = loss_graphacl(g, p, u, v, negatives, cfg).value;

    const std::vector<double> sums = negative_exp_sums(v, negatives, cfg);
    Index z = 0;
    for (Index node = 0; node < g.num_nodes; ++node) {
        if (g.degree(node) > 0) ++z;
    }
    if (z > 0) {
        double bound = 0.0;
        for (Index node = 0; node < g.num_nodes; ++node) {
            const auto nbrs = g.neighbors(node);
            if (nbrs.empty()) continue;
            const double w = 1.0 / (static_cast<double>(z) * static_cast<double>(nbrs.size()));
            for (Index nb : nbrs) {
                bound += w * (-dot_rows(p, node, u, nb) / cfg.tau + std::log(sums[node]));
            }
        }
        out.bound = bound;
    }
    out.pass = out.loss >= out.bound - kSlack;
    return out;
}

JensenCheck check_jensen_bound(const DenseMatrix& v, const IndexMatrix& negatives,
                               const LossConfig& cfg) {
    JensenCheck out;
    out.min_slack = std::numeric_limits<double>::infinity();
    const Index n = v.rows;
    double lhs_acc = 0.0, rhs_acc = 0.0;
    for (Index i = 0; i < n; ++i) {
        double exp_sum = 0.0, lin_sum = 0.0;
        Index count = 0;
        auto visit = [&](Index j) {
            const double x = dot_rows(v, i, v, j) / cfg.tau;
            exp_sum += std::exp(x);
            lin_sum += x;
            ++count;
        };
        if (cfg.k == 0) {
            for (Index j = 0; j < n; ++j) visit(j);
        } else {
            for (Index c = 0; c < cfg.k; ++c) visit(negatives.at(i, c));
        }
        if (count == 0) continue;
        const double lhs = std::log(exp_sum / static_cast<double>(count));
        const double rhs = lin_sum / static_cast<double>(count);
        lhs_acc += lhs;
        rhs_acc += rhs;
        out.min_slack = std::min(out.min_slack, lhs - rhs);
    }
    out.lhs = n > 0 ? lhs_acc / n : 0.0;
    out.rhs = n > 0 ? rhs_acc / n : 0.0;
    if (!std::isfinite(out.min_slack)) out.min_slack = 0.0;
    out.pass = out.min_slack >= -kSlack;
    return out;
}

double two_hop_alignment(const DenseMatrix& embeddings, const Graph& g) {
    if (embeddings.rows != g.num_nodes) {
        throw std::invalid_argument("two_hop_alignment: embeddings not aligned to graph");
    }
    std::vector<Index> stamp(g.num_nodes, 0);
    std::vector<Index> reached;
    double acc = 0.0;
    Index counted = 0;
    for (Index v = 0; v < g.num_nodes; ++v) {
        const Index tag = v + 1;
        reached.clear();
        for (Index j : g.neighbors(v)) {
            for (Index k : g.neighbors(j)) {
                if (k == v || stamp[k] == tag) continue;
                stamp[k] = tag;
                reached.push_back(k);
            }
        }
        if (reached.empty()) continue;
        double node_acc = 0.0;
        for (Index k : reached) {
            const double* a = embeddings.row(v);
            const double* b = embeddings.row(k);
            double d2 = 0.0;
            for (Index t = 0; t < embeddings.cols; ++t) {
                const double d = a[t] - b[t];
                d2 += d * d;
            }
            node_acc += d2;
        }
        acc += node_acc / static_cast<double>(reached.size());
        ++counted;
    }
    return counted == 0 ? 0.0 : acc / static_cast<double>(counted);
}

double estimate_bilipschitz(const PredictorParams& predictor) {
    if (predictor.kind != PredictorKind::linear) {
        throw std::invalid_argument("estimate_bilipschitz: requires a linear predictor");
    }
    const DenseMatrix& w = predictor.weights.front().value;
    const Index d = w.rows;
    Eigen::MatrixXd wm(d, w.cols);
    for (Index i = 0; i < d; ++i) {
        for (Index j = 0; j < w.cols; ++j) wm(i, j) = w.at(i, j);
    }
    Eigen::MatrixXd gram = wm.transpose() * wm;

    // Inverse power iteration toward the smallest eigenvalue of WᵀW.
    Eigen::PartialPivLU<Eigen::MatrixXd> lu(gram);
    Eigen::VectorXd y = Eigen::VectorXd::Ones(gram.rows()).normalized();
    double lambda_min = 0.0;
    for (int it = 0; it < 200; ++it) {
        Eigen::VectorXd next = lu.solve(y);
        const double norm = next.norm();
        if (!(norm > 0.0) || !std::isfinite(norm)) {
            throw std::runtime_error("estimate_bilipschitz: singular predictor weight");
        }
        y = next / norm;
        lambda_min = y.dot(gram * y);
    }
    const double sigma_min = std::sqrt(std::max(lambda_min, 0.0));
    if (sigma_min < 1e-10) {
        throw std::runtime_error("estimate_bilipschitz: sigma_min below 1e-10, bound is vacuous");
    }
    return 1.0 / (sigma_min * sigma_min);
}

Theorem3Terms theorem3_report(double loss, double bilipschitz, double two_hop_homophily,
                              int num_classes) {
    if (two_hop_homophily < 0.0 || two_hop_homophily > 1.0) {
        throw std::invalid_argument("theorem3_report: two-hop homophily outside [0, 1]");
    }
    Theorem3Terms t;
    t.num_classes = num_classes;
    t.loss_term = 4.0 * bilipschitz * loss;
    t.monophily_term = 1.0 - two_hop_homophily;
    const double m = static_cast<double>(num_classes);
    t.bound_value = 4.0 * m * m * (t.loss_term + t.monophily_term);
    return t;
}

double mean_classifier_error(const DenseMatrix& embeddings, std::span<const int> labels,
                             int num_classes) {
    if (labels.size() != embeddings.rows) {
        throw std::invalid_argument("mean_classifier_error: label count mismatch");
    }
    DenseMatrix means(static_cast<Index>(num_classes), embeddings.cols);
    std::vector<Index> counts(num_classes, 0);
    for (Index v = 0; v < embeddings.rows; ++v) {
        double* mu = means.row(static_cast<Index>(labels[v]));
        const double* x = embeddings.row(v);
        for (Index t = 0; t < embeddings.cols; ++t) mu[t] += x[t];
        ++counts[labels[v]];
    }
    for (int c = 0; c < num_classes; ++c) {
        if (counts[c] == 0) continue;
        double* mu = means.row(static_cast<Index>(c));
        for (Index t = 0; t < embeddings.cols; ++t) mu[t] /= static_cast<double>(counts[c]);
    }
    Index wrong = 0;
    for (Index v = 0; v < embeddings.rows; ++v) {
        int best = 0;
        double best_score = -std::numeric_limits<double>::infinity();
        for (int c = 0; c < num_classes; ++c) {
            const double score = dot_rows(means, static_cast<Index>(c), embeddings, v);
            if (score > best_score) {
                best_score = score;
                best = c;
            }
        }
        if (best != labels[v]) ++wrong;
    }
    return static_cast<double>(wrong) / static_cast<double>(embeddings.rows);
}

} // namespace gacl
