#include "gacl/objectives.hpp"

#include "gacl/rng.hpp"

#include <cmath>
#include <stdexcept>

namespace gacl {

namespace {

Index count_non_isolated(const Graph& g) {
    Index z = 0;
    for (Index v = 0; v < g.num_nodes; ++v) {
        if (g.degree(v) > 0) ++z;
    }
    return z;
}

void check_rows(const Graph& g, const DenseMatrix& m, const char* name) {
    if (m.rows != g.num_nodes) {
        throw std::invalid_argument(std::string(name) + ": rows not aligned to nodes");
    }
}

void check_finite(double value, const char* name) {
    if (!std::isfinite(value)) {
        throw NumericalError(std::string(name) + ": non-finite loss value");
    }
}

// Negative-similarity mass per anchor. With k == 0 the full Gram matrix
// exp(V_aᵀV_n / tau) is kept for the closed-form gradient; with sampling the
// per-slot exponentials are kept instead. Entries equal to the anchor are
// dropped when include_self is off.
struct NegativeMass {
    bool full = false;
    DenseMatrix gram_exp;         // full: n_anchor x n_neg
    std::vector<double> slot_exp; // sampled: anchors x k, row-major
    std::vector<double> sums;     // per anchor
};

NegativeMass negative_mass(const DenseMatrix& v_anchor, const DenseMatrix& v_neg,
                           const IndexMatrix& negatives, const LossConfig& cfg) {
    NegativeMass mass;
    const Index n = v_anchor.rows;
    mass.sums.assign(n, 0.0);
    if (cfg.k == 0) {
        mass.full = true;
        mass.gram_exp = matmul_nt(v_anchor, v_neg);
        for (Index i = 0; i < n; ++i) {
            double* row = mass.gram_exp.row(i);
            for (Index j = 0; j < v_neg.rows; ++j) {
                row[j] = (!cfg.include_self_as_negative && j == i) ? 0.0
                                                                   : std::exp(row[j] / cfg.tau);
            }
            double s = 0.0;
            for (Index j = 0; j < v_neg.rows; ++j) s += row[j];
            mass.sums[i] = s;
        }
    } else {
        if (negatives.rows != n || negatives.cols != cfg.k) {
            throw std::invalid_argument("negatives: index matrix shape mismatch");
        }
        mass.slot_exp.assign(static_cast<size_t>(n) * cfg.k, 0.0);
        for (Index i = 0; i < n; ++i) {
            double s = 0.0;
            for (Index c = 0; c < cfg.k; ++c) {
                const Index j = negatives.at(i, c);
                if (!cfg.include_self_as_negative && j == i) continue;
                const double e = std::exp(dot_rows(v_anchor, i, v_neg, j) / cfg.tau);
                mass.slot_exp[static_cast<size_t>(i) * cfg.k + c] = e;
                s += e;
            }
            mass.sums[i] = s;
        }
    }
    return mass;
}

// Adds the gradient of sum_v coeff[v] * S_v to d_anchor/d_neg, where
// S_v = sum_j exp(anchor_vᵀ neg_j / tau) over v's negative set.
void negative_mass_backward(const NegativeMass& mass, const std::vector<double>& coeff,
                            const DenseMatrix& v_anchor, const DenseMatrix& v_neg,
                            const IndexMatrix& negatives, const LossConfig& cfg,
                            DenseMatrix& d_anchor, DenseMatrix& d_neg) {
    const Index n = v_anchor.rows;
    const double inv_tau = 1.0 / cfg.tau;
    if (mass.full) {
        DenseMatrix scaled = mass.gram_exp;
        for (Index i = 0; i < n; ++i) {
            double* row = scaled.row(i);
            for (Index j = 0; j < scaled.cols; ++j) row[j] *= coeff[i] * inv_tau;
        }
        add_inplace(d_anchor, matmul(scaled, v_neg));
        add_inplace(d_neg, matmul_tn(scaled, v_anchor));
    } else {
        for (Index i = 0; i < n; ++i) {
            if (coeff[i] == 0.0) continue;
            for (Index c = 0; c < cfg.k; ++c) {
                const Index j = negatives.at(i, c);
                const double w = coeff[i] * inv_tau * mass.slot_exp[static_cast<size_t>(i) * cfg.k + c];
                if (w == 0.0) continue;
                const double* nj = v_neg.row(j);
                const double* ai = v_anchor.row(i);
                double* da = d_anchor.row(i);
                double* dn = d_neg.row(j);
                for (Index t = 0; t < v_anchor.cols; ++t) {
                    da[t] += w * nj[t];
                    dn[t] += w * ai[t];
                }
            }
        }
    }
}

// Shared core of the two InfoNCE-style losses. Positive logits pair
// pos_lhs with its one-hop neighbors in pos_rhs; the denominator mass pairs
// neg_anchor with the negative set drawn from neg_anchor itself.
// Gradients: d_pos_lhs / d_pos_rhs for the positive side (d_pos_rhs may be
// null for a detached target), d_neg for the negative side.
double contrastive_core(const Graph& g, const DenseMatrix& pos_lhs, const DenseMatrix& pos_rhs,
                        const DenseMatrix& neg_anchor, const IndexMatrix& negatives,
                        const LossConfig& cfg, DenseMatrix& d_pos_lhs, DenseMatrix* d_pos_rhs,
                        DenseMatrix& d_neg) {
    const Index z = count_non_isolated(g);
    if (z == 0) return 0.0;

    NegativeMass mass = negative_mass(neg_anchor, neg_anchor, negatives, cfg);

    const double inv_tau = 1.0 / cfg.tau;
    std::vector<double> coeff(g.num_nodes, 0.0);
    double value = 0.0;
    for (Index v = 0; v < g.num_nodes; ++v) {
        const auto nbrs = g.neighbors(v);
        if (nbrs.empty()) continue;
        const double w = 1.0 / (static_cast<double>(z) * static_cast<double>(nbrs.size()));
        for (Index u : nbrs) {
            const double logit = dot_rows(pos_lhs, v, pos_rhs, u) * inv_tau;
            const double e_pos = std::exp(logit);
            const double denom = e_pos + mass.sums[v];
            value += w * (-logit + std::log(denom));
            const double sigma = e_pos / denom;
            coeff[v] += w / denom;
            // d(-logit + log(e_pos + S)) / d logit = sigma - 1
            const double gp = w * (sigma - 1.0) * inv_tau;
            const double* ru = pos_rhs.row(u);
            const double* rv = pos_lhs.row(v);
            double* dl = d_pos_lhs.row(v);
            for (Index t = 0; t < pos_lhs.cols; ++t) dl[t] += gp * ru[t];
            if (d_pos_rhs != nullptr) {
                double* dr = d_pos_rhs->row(u);
                for (Index t = 0; t < pos_lhs.cols; ++t) dr[t] += gp * rv[t];
            }
        }
    }
    negative_mass_backward(mass, coeff, neg_anchor, neg_anchor, negatives, cfg, d_neg, d_neg);
    return value;
}

} // namespace

IndexMatrix sample_negatives(Index num_nodes, Index k, Index anchors, std::uint64_t seed) {
    if (num_nodes < 1) throw std::invalid_argument("sample_negatives: num_nodes must be >= 1");
    if (k < 1) throw std::invalid_argument("sample_negatives: k must be >= 1");
    Rng rng(seed);
    IndexMatrix idx(anchors, k);
    for (Index a = 0; a < anchors; ++a) {
        for (Index c = 0; c < k; ++c) idx.at(a, c) = static_cast<Index>(rng.uniform_index(num_nodes));
    }
    return idx;
}

LossOutput loss_graphacl(const Graph& g, const DenseMatrix& p, const DenseMatrix& u,
                         const DenseMatrix& v, const IndexMatrix& negatives,
                         const LossConfig& cfg) {
    check_rows(g, p, "loss_graphacl");
    check_rows(g, u, "loss_graphacl");
    check_rows(g, v, "loss_graphacl");
    LossOutput out;
    out.grad_p = DenseMatrix(p.rows, p.cols);
    out.grad_v = DenseMatrix(v.rows, v.cols);
    out.value = contrastive_core(g, p, u, v, negatives, cfg, out.grad_p, nullptr, out.grad_v);
    check_finite(out.value, "loss_graphacl");
    return out;
}

LossOutput loss_smoothing(const Graph& g, const DenseMatrix& v_anchor,
                          const DenseMatrix& v_other, const IndexMatrix& negatives,
                          const LossConfig& cfg) {
    check_rows(g, v_anchor, "loss_smoothing");
    check_rows(g, v_other, "loss_smoothing");
    LossOutput out;
    out.grad_anchor = DenseMatrix(v_anchor.rows, v_anchor.cols);
    out.grad_other = DenseMatrix(v_other.rows, v_other.cols);
    out.value = contrastive_core(g, v_anchor, v_other, v_anchor, negatives, cfg,
                                 out.grad_anchor, &out.grad_other, out.grad_anchor);
    check_finite(out.value, "loss_smoothing");
    return out;
}

LossOutput loss_pre(const Graph& g, const DenseMatrix& p, const DenseMatrix& u) {
    check_rows(g, p, "loss_pre");
    check_rows(g, u, "loss_pre");
    LossOutput out;
    out.grad_p = DenseMatrix(p.rows, p.cols);
    const Index z = count_non_isolated(g);
    if (z == 0) return out;
    for (Index v = 0; v < g.num_nodes; ++v) {
        const auto nbrs = g.neighbors(v);
        if (nbrs.empty()) continue;
        const double w = 1.0 / (static_cast<double>(z) * static_cast<double>(nbrs.size()));
        const double* pv = p.row(v);
        double* dp = out.grad_p.row(v);
        for (Index nb : nbrs) {
            const double* un = u.row(nb);
            double sq = 0.0;
            for (Index t = 0; t < p.cols; ++t) {
                const double d = pv[t] - un[t];
                sq += d * d;
                dp[t] += 2.0 * w * d;
            }
            out.value += w * sq;
        }
    }
    check_finite(out.value, "loss_pre");
    return out;
}

LossOutput loss_uni(const DenseMatrix& v, const IndexMatrix& negatives, const LossConfig& cfg) {
    LossOutput out;
    out.grad_v = DenseMatrix(v.rows, v.cols);
    const Index n = v.rows;
    if (n == 0) return out;

    if (cfg.k == 0) {
        // sum_{a,b} ‖v_a - v_b‖² = 2n·sum‖v_a‖² - 2‖sum v_a‖²
        std::vector<double> colsum(v.cols, 0.0);
        double sq_sum = 0.0;
        for (Index i = 0; i < n; ++i) {
            const double* row = v.row(i);
            for (Index t = 0; t < v.cols; ++t) {
                colsum[t] += row[t];
                sq_sum += row[t] * row[t];
            }
        }
        double centroid_sq = 0.0;
        for (double s : colsum) centroid_sq += s * s;
        const double scale = 1.0 / (static_cast<double>(n) * static_cast<double>(n));
        out.value = -scale * (2.0 * n * sq_sum - 2.0 * centroid_sq);
        for (Index i = 0; i < n; ++i) {
            const double* row = v.row(i);
            double* dv = out.grad_v.row(i);
            for (Index t = 0; t < v.cols; ++t) dv[t] = -scale * 4.0 * (n * row[t] - colsum[t]);
        }
    } else {
        if (negatives.rows != n || negatives.cols != cfg.k) {
            throw std::invalid_argument("loss_uni: index matrix shape mismatch");
        }
        const double scale = 1.0 / (static_cast<double>(n) * static_cast<double>(cfg.k));
        for (Index i = 0; i < n; ++i) {
            const double* ri = v.row(i);
            double* di = out.grad_v.row(i);
            for (Index c = 0; c < cfg.k; ++c) {
                const Index j = negatives.at(i, c);
                const double* rj = v.row(j);
                double* dj = out.grad_v.row(j);
                double sq = 0.0;
                for (Index t = 0; t < v.cols; ++t) {
                    const double d = ri[t] - rj[t];
                    sq += d * d;
                    di[t] -= 2.0 * scale * d;
                    dj[t] += 2.0 * scale * d;
                }
                out.value -= scale * sq;
            }
        }
    }
    check_finite(out.value, "loss_uni");
    return out;
}

LossOutput loss_com(const Graph& g, const DenseMatrix& p, const DenseMatrix& u,
                    const DenseMatrix& v, const IndexMatrix& negatives, const LossConfig& cfg) {
    LossOutput pre = loss_pre(g, p, u);
    LossOutput uni = loss_uni(v, negatives, cfg);
    LossOutput out;
    out.value = pre.value + uni.value;
    out.grad_p = std::move(pre.grad_p);
    out.grad_v = std::move(uni.grad_v);
    return out;
}

} // namespace gacl
