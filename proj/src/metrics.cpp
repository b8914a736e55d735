#include "gacl/metrics.hpp"

#include "gacl/rng.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <stdexcept>

namespace gacl {

namespace {

void require_labels(const Graph& g, const char* who) {
    if (!g.has_labels()) throw std::invalid_argument(std::string(who) + ": graph has no labels");
}

} // namespace

double homophily_ratio(const Graph& g) {
    require_labels(g, "homophily_ratio");
    Index same = 0, total = 0;
    for (Index u = 0; u < g.num_nodes; ++u) {
        for (Index v : g.neighbors(u)) {
            if (u < v) {
                ++total;
                if (g.labels[u] == g.labels[v]) ++same;
            }
        }
    }
    return total == 0 ? 0.0 : static_cast<double>(same) / static_cast<double>(total);
}

double two_hop_monophily(const Graph& g) {
    require_labels(g, "two_hop_monophily");
    std::vector<Index> stamp(g.num_nodes, 0);
    double acc = 0.0;
    Index counted_nodes = 0;
    for (Index v = 0; v < g.num_nodes; ++v) {
        const Index tag = v + 1;
        Index n2 = 0, same = 0;
        for (Index j : g.neighbors(v)) {
            for (Index k : g.neighbors(j)) {
                if (k == v || stamp[k] == tag) continue;
                stamp[k] = tag;
                ++n2;
                if (g.labels[k] == g.labels[v]) ++same;
            }
        }
        if (n2 > 0) {
            acc += static_cast<double>(same) / static_cast<double>(n2);
            ++counted_nodes;
        }
    }
    return counted_nodes == 0 ? 0.0 : acc / static_cast<double>(counted_nodes);
}

NeighborhoodSimilarity class_neighborhood_similarity(const Graph& g) {
    require_labels(g, "class_neighborhood_similarity");
    const int m = g.num_classes;

    // s(m, m') decomposes into a product of per-class sums of the normalized
    // neighbor-label histograms, since cos(d(u), d(v)) = d̂(u)·d̂(v).
    DenseMatrix hist_sum(static_cast<Index>(m), static_cast<Index>(m));
    std::vector<Index> class_size(m, 0);
    std::vector<double> hist(m);
    for (Index v = 0; v < g.num_nodes; ++v) {
        ++class_size[g.labels[v]];
        std::fill(hist.begin(), hist.end(), 0.0);
        for (Index u : g.neighbors(v)) hist[g.labels[u]] += 1.0;
        double norm = 0.0;
        for (double h : hist) norm += h * h;
        if (norm == 0.0) continue;  // zero histogram: cos taken as 0
        norm = std::sqrt(norm);
        double* row = hist_sum.row(static_cast<Index>(g.labels[v]));
        for (int c = 0; c < m; ++c) row[c] += hist[c] / norm;
    }

    NeighborhoodSimilarity result;
    result.matrix = DenseMatrix(static_cast<Index>(m), static_cast<Index>(m));
    double diag = 0.0;
    for (int a = 0; a < m; ++a) {
        for (int b = 0; b < m; ++b) {
            double dot = 0.0;
            for (int c = 0; c < m; ++c) dot += hist_sum.at(a, c) * hist_sum.at(b, c);
            const double pairs = static_cast<double>(class_size[a]) * static_cast<double>(class_size[b]);
            result.matrix.at(a, b) = pairs > 0.0 ? dot / pairs : 0.0;
        }
        diag += result.matrix.at(a, a);
    }
    result.intra_mean = m > 0 ? diag / static_cast<double>(m) : 0.0;
    return result;
}

GraphStats graph_stats(const Graph& g) {
    GraphStats s;
    s.num_nodes = g.num_nodes;
    s.num_edges = g.num_edges();
    s.num_classes = g.num_classes;
    s.homophily = homophily_ratio(g);
    s.two_hop_monophily = two_hop_monophily(g);
    s.neighborhood_similarity = class_neighborhood_similarity(g).intra_mean;
    return s;
}

Splits make_stratified_splits(std::span<const int> labels, double train_frac, double val_frac,
                              std::uint64_t seed) {
    int m = 0;
    for (int y : labels) m = std::max(m, y + 1);
    std::vector<std::vector<Index>> per_class(m);
    for (Index v = 0; v < labels.size(); ++v) per_class[labels[v]].push_back(v);

    Rng rng(seed);
    Splits splits;
    for (auto& nodes : per_class) {
        // Fisher-Yates with the deterministic engine
        for (size_t i = nodes.size(); i > 1; --i) {
            std::swap(nodes[i - 1], nodes[rng.uniform_index(i)]);
        }
        const size_t n_train = std::max<size_t>(1, static_cast<size_t>(train_frac * nodes.size()));
        const size_t n_val = std::max<size_t>(1, static_cast<size_t>(val_frac * nodes.size()));
        for (size_t i = 0; i < nodes.size(); ++i) {
            if (i < n_train) splits.train.push_back(nodes[i]);
            else if (i < n_train + n_val) splits.val.push_back(nodes[i]);
            else splits.test.push_back(nodes[i]);
        }
    }
    std::sort(splits.train.begin(), splits.train.end());
    std::sort(splits.val.begin(), splits.val.end());
    std::sort(splits.test.begin(), splits.test.end());
    return splits;
}

namespace {

// argmax with lowest-index tie break
int argmax_row(const double* row, int n) {
    int best = 0;
    for (int j = 1; j < n; ++j) {
        if (row[j] > row[best]) best = j;
    }
    return best;
}

double split_accuracy(const DenseMatrix& logits, std::span<const int> labels,
                      std::span<const Index> split) {
    if (split.empty()) return 0.0;
    Index correct = 0;
    for (Index v : split) {
        if (argmax_row(logits.row(v), static_cast<int>(logits.cols)) == labels[v]) ++correct;
    }
    return static_cast<double>(correct) / static_cast<double>(split.size());
}

} // namespace

ProbeResult linear_probe(const DenseMatrix& embeddings, std::span<const int> labels,
                         int num_classes, const Splits& splits, const ProbeConfig& cfg) {
    if (splits.train.empty() || splits.val.empty() || splits.test.empty()) {
        throw std::invalid_argument("linear_probe: empty split");
    }
    const Index d = embeddings.cols;
    const Index m = static_cast<Index>(num_classes);

    ProbeResult result;
    for (int s = 0; s < cfg.num_seeds; ++s) {
        Rng rng(mix_seed(cfg.seed, static_cast<std::uint64_t>(s)));
        ParamTensor w(d, m);
        ParamTensor b(1, m);
        const double init_scale = 0.01 / std::sqrt(static_cast<double>(d));
        for (double& x : w.value.data) x = init_scale * rng.normal();

        double best_val = -1.0;
        double best_test = 0.0;
        const double inv_n = 1.0 / static_cast<double>(splits.train.size());
        for (int epoch = 0; epoch < cfg.epochs; ++epoch) {
            DenseMatrix logits = affine(embeddings, w, b);

            // softmax cross-entropy gradient over the train split only
            w.zero_grad();
            b.zero_grad();
            for (Index v : splits.train) {
                double* row = logits.row(v);
                double mx = row[0];
                for (Index j = 1; j < m; ++j) mx = std::max(mx, row[j]);
                double z = 0.0;
                for (Index j = 0; j < m; ++j) z += std::exp(row[j] - mx);
                const double* x = embeddings.row(v);
                for (Index j = 0; j < m; ++j) {
                    const double p = std::exp(row[j] - mx) / z;
                    const double gj = (p - (labels[v] == static_cast<int>(j) ? 1.0 : 0.0)) * inv_n;
                    b.grad.at(0, j) += gj;
                    for (Index t = 0; t < d; ++t) w.grad.at(t, j) += gj * x[t];
                }
            }
            for (size_t i = 0; i < w.value.data.size(); ++i) {
                w.value.data[i] -= cfg.lr * (w.grad.data[i] + cfg.weight_decay * w.value.data[i]);
            }
            for (size_t i = 0; i < b.value.data.size(); ++i) {
                b.value.data[i] -= cfg.lr * b.grad.data[i];
            }

            DenseMatrix eval_logits = affine(embeddings, w, b);
            const double val_acc = split_accuracy(eval_logits, labels, splits.val);
            if (val_acc > best_val) {
                best_val = val_acc;
                best_test = split_accuracy(eval_logits, labels, splits.test);
            }
        }
        result.per_seed.push_back(best_test);
    }

    double mean = 0.0;
    for (double a : result.per_seed) mean += a;
    mean /= static_cast<double>(result.per_seed.size());
    double var = 0.0;
    for (double a : result.per_seed) var += (a - mean) * (a - mean);
    var /= static_cast<double>(result.per_seed.size());
    result.accuracy_mean = mean;
    result.accuracy_std = std::sqrt(var);
    return result;
}

namespace {

double kmeans_assign(const DenseMatrix& x, const DenseMatrix& centers, std::vector<int>& assign) {
    double inertia = 0.0;
    for (Index i = 0; i < x.rows; ++i) {
        const double* xi = x.row(i);
        double best = std::numeric_limits<double>::infinity();
        int best_c = 0;
        for (Index c = 0; c < centers.rows; ++c) {
            const double* mu = centers.row(c);
            double d2 = 0.0;
            for (Index t = 0; t < x.cols; ++t) {
                const double d = xi[t] - mu[t];
                d2 += d * d;
            }
            if (d2 < best) {
                best = d2;
                best_c = static_cast<int>(c);
            }
        }
        assign[i] = best_c;
        inertia += best;
    }
    return inertia;
}

DenseMatrix kmeans_pp_init(const DenseMatrix& x, Index k, Rng& rng) {
    DenseMatrix centers(k, x.cols);
    const Index first = static_cast<Index>(rng.uniform_index(x.rows));
    std::copy_n(x.row(first), x.cols, centers.row(0));

    std::vector<double> d2(x.rows, std::numeric_limits<double>::infinity());
    for (Index c = 1; c < k; ++c) {
        double total = 0.0;
        for (Index i = 0; i < x.rows; ++i) {
            const double* xi = x.row(i);
            const double* mu = centers.row(c - 1);
            double d = 0.0;
            for (Index t = 0; t < x.cols; ++t) {
                const double diff = xi[t] - mu[t];
                d += diff * diff;
            }
            d2[i] = std::min(d2[i], d);
            total += d2[i];
        }
        Index chosen = 0;
        if (total > 0.0) {
            const double r = rng.uniform() * total;
            double cum = 0.0;
            for (Index i = 0; i < x.rows; ++i) {
                cum += d2[i];
                if (cum >= r) {
                    chosen = i;
                    break;
                }
            }
        } else {
            chosen = static_cast<Index>(rng.uniform_index(x.rows));
        }
        std::copy_n(x.row(chosen), x.cols, centers.row(c));
    }
    return centers;
}

std::vector<int> kmeans(const DenseMatrix& x, Index k, std::uint64_t seed, int restarts = 10,
                        int max_iters = 100) {
    std::vector<int> best_assign(x.rows, 0);
    double best_inertia = std::numeric_limits<double>::infinity();
    for (int r = 0; r < restarts; ++r) {
        Rng rng(mix_seed(seed, static_cast<std::uint64_t>(r)));
        DenseMatrix centers = kmeans_pp_init(x, k, rng);
        std::vector<int> assign(x.rows, -1);
        double inertia = 0.0;
        for (int it = 0; it < max_iters; ++it) {
            inertia = kmeans_assign(x, centers, assign);
            DenseMatrix next(k, x.cols);
            std::vector<Index> counts(k, 0);
            for (Index i = 0; i < x.rows; ++i) {
                double* mu = next.row(static_cast<Index>(assign[i]));
                const double* xi = x.row(i);
                for (Index t = 0; t < x.cols; ++t) mu[t] += xi[t];
                ++counts[assign[i]];
            }
            bool moved = false;
            for (Index c = 0; c < k; ++c) {
                if (counts[c] == 0) {
                    // revive an empty cluster at the farthest point
                    double far = -1.0;
                    Index far_i = 0;
                    for (Index i = 0; i < x.rows; ++i) {
                        const double* xi = x.row(i);
                        const double* mu = centers.row(static_cast<Index>(assign[i]));
                        double d = 0.0;
                        for (Index t = 0; t < x.cols; ++t) {
                            const double diff = xi[t] - mu[t];
                            d += diff * diff;
                        }
                        if (d > far) {
                            far = d;
                            far_i = i;
                        }
                    }
                    std::copy_n(x.row(far_i), x.cols, next.row(c));
                    counts[c] = 1;
                    moved = true;
                    continue;
                }
                double shift = 0.0;
                for (Index t = 0; t < x.cols; ++t) {
                    const double mu = next.at(c, t) / static_cast<double>(counts[c]);
                    shift += (mu - centers.at(c, t)) * (mu - centers.at(c, t));
                    next.at(c, t) = mu;
                }
                if (shift > 1e-18) moved = true;
            }
            centers = std::move(next);
            if (!moved) break;
        }
        inertia = kmeans_assign(x, centers, assign);
        if (inertia < best_inertia) {
            best_inertia = inertia;
            best_assign = assign;
        }
    }
    return best_assign;
}

double entropy(std::span<const int> labels, int m) {
    std::vector<double> counts(m, 0.0);
    for (int y : labels) counts[y] += 1.0;
    const double n = static_cast<double>(labels.size());
    double h = 0.0;
    for (double c : counts) {
        if (c > 0.0) h -= (c / n) * std::log(c / n);
    }
    return h;
}

} // namespace

double normalized_mutual_information(std::span<const int> a, std::span<const int> b) {
    if (a.size() != b.size() || a.empty()) {
        throw std::invalid_argument("nmi: labelings must be non-empty and equal length");
    }
    int ma = 0, mb = 0;
    for (size_t i = 0; i < a.size(); ++i) {
        ma = std::max(ma, a[i] + 1);
        mb = std::max(mb, b[i] + 1);
    }
    DenseMatrix joint(static_cast<Index>(ma), static_cast<Index>(mb));
    for (size_t i = 0; i < a.size(); ++i) joint.at(a[i], b[i]) += 1.0;
    const double n = static_cast<double>(a.size());

    double mi = 0.0;
    for (int i = 0; i < ma; ++i) {
        double pi = 0.0;
        for (int j = 0; j < mb; ++j) pi += joint.at(i, j);
        for (int j = 0; j < mb; ++j) {
            const double pij = joint.at(i, j);
            if (pij == 0.0) continue;
            double pj = 0.0;
            for (int r = 0; r < ma; ++r) pj += joint.at(r, j);
            mi += (pij / n) * std::log((pij * n) / (pi * pj));
        }
    }
    const double norm = 0.5 * (entropy(a, ma) + entropy(b, mb));
    if (norm == 0.0) return 1.0;  // both labelings constant: identical partitions
    return std::clamp(mi / norm, 0.0, 1.0);
}

double kmeans_nmi(const DenseMatrix& embeddings, std::span<const int> labels, int num_classes,
                  std::uint64_t seed) {
    if (num_classes < 2) throw std::invalid_argument("kmeans_nmi: need at least 2 classes");
    std::vector<int> assign = kmeans(embeddings, static_cast<Index>(num_classes), seed);
    std::vector<int> truth(labels.begin(), labels.end());
    return normalized_mutual_information(assign, truth);
}

namespace {

double cosine_rows(const DenseMatrix& x, Index i, Index j) {
    const double* a = x.row(i);
    const double* b = x.row(j);
    double dot = 0.0, na = 0.0, nb = 0.0;
    for (Index t = 0; t < x.cols; ++t) {
        dot += a[t] * b[t];
        na += a[t] * a[t];
        nb += b[t] * b[t];
    }
    const double denom = std::sqrt(na) * std::sqrt(nb);
    return denom < kNormEps ? 0.0 : dot / denom;
}

std::vector<double> edge_cosines(const DenseMatrix& emb, const Graph& g, Index cap, Rng& rng) {
    const EdgeList edges = undirected_edges(g);
    std::vector<double> out;
    if (edges.size() <= cap) {
        out.reserve(edges.size());
        for (const auto& [u, v] : edges) out.push_back(cosine_rows(emb, u, v));
    } else {
        out.reserve(cap);
        for (Index i = 0; i < cap; ++i) {
            const auto& [u, v] = edges[rng.uniform_index(edges.size())];
            out.push_back(cosine_rows(emb, u, v));
        }
    }
    return out;
}

} // namespace

SimilarityHistograms similarity_histograms(const DenseMatrix& embeddings, const Graph& g,
                                           Index num_random_pairs, std::uint64_t seed,
                                           const PredictorParams* predictor) {
    if (embeddings.rows != g.num_nodes) {
        throw std::invalid_argument("similarity_histograms: embeddings not aligned to graph");
    }
    constexpr Index kPairCap = 1000000;
    Rng rng(seed);
    SimilarityHistograms h;

    const Index n_random = std::min(num_random_pairs, kPairCap);
    h.random_pairs.reserve(n_random);
    for (Index i = 0; i < n_random; ++i) {
        const Index a = static_cast<Index>(rng.uniform_index(g.num_nodes));
        const Index b = static_cast<Index>(rng.uniform_index(g.num_nodes));
        h.random_pairs.push_back(cosine_rows(embeddings, a, b));
    }

    h.one_hop = edge_cosines(embeddings, g, kPairCap, rng);
    h.two_hop = edge_cosines(embeddings, two_hop_graph(g), kPairCap, rng);

    if (predictor != nullptr) {
        const DenseMatrix p = predictor_forward(embeddings, *predictor);
        h.predictor_similarity.reserve(g.num_nodes);
        for (Index v = 0; v < g.num_nodes; ++v) {
            const double* a = embeddings.row(v);
            const double* b = p.row(v);
            double dot = 0.0, na = 0.0, nb = 0.0;
            for (Index t = 0; t < embeddings.cols; ++t) {
                dot += a[t] * b[t];
                na += a[t] * a[t];
                nb += b[t] * b[t];
            }
            const double denom = std::sqrt(na) * std::sqrt(nb);
            h.predictor_similarity.push_back(denom < kNormEps ? 0.0 : dot / denom);
        }
    }
    return h;
}

} // namespace gacl
