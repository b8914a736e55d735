#include "gacl/encoder.hpp"

#include "gacl/rng.hpp"

#include <cmath>
#include <cstring>
#include <fstream>
#include <stdexcept>

namespace gacl {

namespace {

ParamTensor glorot_tensor(Index rows, Index cols, Rng& rng) {
    ParamTensor t(rows, cols);
    const double limit = std::sqrt(6.0 / static_cast<double>(rows + cols));
    for (double& v : t.value.data) v = rng.uniform(-limit, limit);
    return t;
}

} // namespace

EncoderParams EncoderParams::glorot(Index input_dim, Index hidden_dim, Index output_dim,
                                    int num_layers, std::uint64_t seed) {
    if (num_layers < 1) throw std::invalid_argument("encoder: layer count must be >= 1");
    Rng rng(seed);
    EncoderParams p;
    Index in = input_dim;
    for (int l = 0; l < num_layers; ++l) {
        const Index out = (l == num_layers - 1) ? output_dim : hidden_dim;
        p.weights.push_back(glorot_tensor(in, out, rng));
        p.biases.emplace_back(1, out);
        in = out;
    }
    return p;
}

void EncoderParams::copy_values_from(const EncoderParams& other) {
    if (weights.size() != other.weights.size()) {
        throw std::invalid_argument("encoder: shape mismatch in copy_values_from");
    }
    for (size_t l = 0; l < weights.size(); ++l) {
        weights[l].value = other.weights[l].value;
        biases[l].value = other.biases[l].value;
    }
}

std::vector<ParamTensor*> EncoderParams::tensors() {
    std::vector<ParamTensor*> out;
    for (size_t l = 0; l < weights.size(); ++l) {
        out.push_back(&weights[l]);
        out.push_back(&biases[l]);
    }
    return out;
}

std::vector<const ParamTensor*> EncoderParams::tensors() const {
    std::vector<const ParamTensor*> out;
    for (size_t l = 0; l < weights.size(); ++l) {
        out.push_back(&weights[l]);
        out.push_back(&biases[l]);
    }
    return out;
}

PredictorParams PredictorParams::make(PredictorKind kind, Index dim, std::uint64_t seed) {
    Rng rng(seed);
    PredictorParams p;
    p.kind = kind;
    if (kind == PredictorKind::mlp) {
        p.weights.push_back(glorot_tensor(dim, dim, rng));
        p.biases.emplace_back(1, dim);
        p.weights.push_back(glorot_tensor(dim, dim, rng));
        p.biases.emplace_back(1, dim);
    } else if (kind == PredictorKind::linear) {
        p.weights.push_back(glorot_tensor(dim, dim, rng));
        p.biases.emplace_back(1, dim);
    }
    return p;
}

std::vector<ParamTensor*> PredictorParams::tensors() {
    std::vector<ParamTensor*> out;
    for (size_t l = 0; l < weights.size(); ++l) {
        out.push_back(&weights[l]);
        out.push_back(&biases[l]);
    }
    return out;
}

std::vector<const ParamTensor*> PredictorParams::tensors() const {
    std::vector<const ParamTensor*> out;
    for (size_t l = 0; l < weights.size(); ++l) {
        out.push_back(&weights[l]);
        out.push_back(&biases[l]);
    }
    return out;
}

std::vector<ParamTensor*> ModelState::trainable_tensors() {
    std::vector<ParamTensor*> out = online.tensors();
    for (ParamTensor* t : predictor.tensors()) out.push_back(t);
    return out;
}

GcnForwardCache gcn_forward_cached(const SparseMatrix& adj, const DenseMatrix& x,
                                   const EncoderParams& params) {
    if (x.rows != adj.rows) throw std::invalid_argument("gcn_forward: feature rows != num_nodes");
    GcnForwardCache cache;
    cache.adj = &adj;
    const int layers = params.layers();
    DenseMatrix h = x;
    for (int l = 0; l < layers; ++l) {
        cache.layer_inputs.push_back(h);
        DenseMatrix t = matmul(h, params.weights[l].value);
        DenseMatrix z = spmm(adj, t);
        for (Index i = 0; i < z.rows; ++i) {
            double* row = z.row(i);
            for (Index j = 0; j < z.cols; ++j) row[j] += params.biases[l].value.at(0, j);
        }
        cache.pre_acts.push_back(z);
        h = (l + 1 < layers) ? elu(z) : z;
    }
    cache.norm = l2_normalize_rows_cached(h);
    return cache;
}

DenseMatrix gcn_forward(const SparseMatrix& adj, const DenseMatrix& x, const EncoderParams& params) {
    return gcn_forward_cached(adj, x, params).norm.output;
}

void gcn_backward(const GcnForwardCache& cache, EncoderParams& params, const DenseMatrix& d_output) {
    const int layers = params.layers();
    DenseMatrix d = l2_normalize_rows_backward(cache.norm, d_output);
    for (int l = layers - 1; l >= 0; --l) {
        if (l + 1 < layers) d = elu_backward(cache.pre_acts[l], d);
        for (Index i = 0; i < d.rows; ++i) {
            const double* row = d.row(i);
            for (Index j = 0; j < d.cols; ++j) params.biases[l].grad.at(0, j) += row[j];
        }
        DenseMatrix dt = spmm(*cache.adj, d);  // A_hat symmetric
        DenseMatrix dw = matmul_tn(cache.layer_inputs[l], dt);
        add_inplace(params.weights[l].grad, dw);
        if (l > 0) d = matmul_nt(dt, params.weights[l].value);
    }
}

PredictorForwardCache predictor_forward_cached(const DenseMatrix& v, const PredictorParams& params) {
    PredictorForwardCache cache;
    cache.input = &v;
    if (params.kind == PredictorKind::identity) {
        cache.identity = true;
        cache.norm.output = v;
        return cache;
    }
    if (v.cols != params.weights.front().value.rows) {
        throw std::invalid_argument("predictor: input dim mismatch");
    }
    DenseMatrix h = v;
    const size_t layers = params.weights.size();
    for (size_t l = 0; l < layers; ++l) {
        cache.layer_inputs.push_back(h);
        DenseMatrix z = affine(h, params.weights[l], params.biases[l]);
        cache.pre_acts.push_back(z);
        h = (l + 1 < layers) ? elu(z) : z;
    }
    cache.norm = l2_normalize_rows_cached(h);
    return cache;
}

DenseMatrix predictor_forward(const DenseMatrix& v, const PredictorParams& params) {
    return predictor_forward_cached(v, params).norm.output;
}

DenseMatrix predictor_backward(const PredictorForwardCache& cache, PredictorParams& params,
                               const DenseMatrix& d_output) {
    if (cache.identity) return d_output;
    DenseMatrix d = l2_normalize_rows_backward(cache.norm, d_output);
    const int layers = static_cast<int>(params.weights.size());
    for (int l = layers - 1; l >= 0; --l) {
        if (l + 1 < layers) d = elu_backward(cache.pre_acts[l], d);
        d = affine_backward(cache.layer_inputs[l], params.weights[l], params.biases[l], d);
    }
    return d;
}

DenseMatrix target_forward(const SparseMatrix& adj, const DenseMatrix& x, const ModelState& state) {
    return gcn_forward(adj, x, state.target);
}

void ema_update(ModelState& state, double lambda) {
    if (lambda < 0.0 || lambda > 1.0) throw std::invalid_argument("ema_update: lambda outside [0, 1]");
    auto tgt = state.target.tensors();
    auto src = state.online.tensors();
    for (size_t i = 0; i < tgt.size(); ++i) {
        DenseMatrix& t = tgt[i]->value;
        const DenseMatrix& o = src[i]->value;
        for (size_t k = 0; k < t.data.size(); ++k) {
            t.data[k] = lambda * t.data[k] + (1.0 - lambda) * o.data[k];
        }
    }
}

namespace {

void write_u32(std::ofstream& out, std::uint32_t v) {
    out.write(reinterpret_cast<const char*>(&v), sizeof(v));
}

void write_tensor(std::ofstream& out, const DenseMatrix& m) {
    write_u32(out, m.rows);
    write_u32(out, m.cols);
    out.write(reinterpret_cast<const char*>(m.data.data()),
              static_cast<std::streamsize>(m.data.size() * sizeof(double)));
}

} // namespace

void write_checkpoint(const std::filesystem::path& path, const ModelState& state) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("checkpoint: cannot open " + path.string());
    out.write("GACLCKPT", 8);
    write_u32(out, 1);
    for (const ParamTensor* t : state.online.tensors()) write_tensor(out, t->value);
    for (const ParamTensor* t : state.target.tensors()) write_tensor(out, t->value);
    for (const ParamTensor* t : state.predictor.tensors()) write_tensor(out, t->value);
    if (!out) throw std::runtime_error("checkpoint: write failed for " + path.string());
}

std::vector<DenseMatrix> read_checkpoint_tensors(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("checkpoint: cannot open " + path.string());
    char magic[8];
    in.read(magic, 8);
    if (!in || std::string(magic, 8) != "GACLCKPT") {
        throw std::runtime_error("checkpoint: bad magic in " + path.string());
    }
    std::uint32_t version = 0;
    in.read(reinterpret_cast<char*>(&version), 4);
    if (!in || version != 1) throw std::runtime_error("checkpoint: unsupported version");
    std::vector<DenseMatrix> tensors;
    while (true) {
        std::uint32_t rows = 0, cols = 0;
        in.read(reinterpret_cast<char*>(&rows), 4);
        if (in.eof()) break;
        in.read(reinterpret_cast<char*>(&cols), 4);
        if (!in) throw std::runtime_error("checkpoint: truncated header in " + path.string());
        DenseMatrix m(rows, cols);
        in.read(reinterpret_cast<char*>(m.data.data()),
                static_cast<std::streamsize>(m.data.size() * sizeof(double)));
        if (!in) throw std::runtime_error("checkpoint: truncated tensor in " + path.string());
        tensors.push_back(std::move(m));
    }
    return tensors;
}

} // namespace gacl
