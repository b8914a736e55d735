#include "gacl/matrix.hpp"

#include <Eigen/Dense>

#include <cmath>
#include <stdexcept>
#include <string>

namespace gacl {

namespace {

using EigenRowMajor = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;
using ConstMap = Eigen::Map<const EigenRowMajor>;
using Map = Eigen::Map<EigenRowMajor>;

ConstMap as_eigen(const DenseMatrix& m) { return ConstMap(m.data.data(), m.rows, m.cols); }
Map as_eigen(DenseMatrix& m) { return Map(m.data.data(), m.rows, m.cols); }

void require(bool ok, const std::string& what) {
    if (!ok) throw std::invalid_argument(what);
}

std::string shape_str(const DenseMatrix& m) {
    return std::to_string(m.rows) + "x" + std::to_string(m.cols);
}

} // namespace

DenseMatrix matmul(const DenseMatrix& a, const DenseMatrix& b) {
    require(a.cols == b.rows, "matmul: shape mismatch " + shape_str(a) + " * " + shape_str(b));
    DenseMatrix c(a.rows, b.cols);
    as_eigen(c).noalias() = as_eigen(a) * as_eigen(b);
    return c;
}

DenseMatrix matmul_tn(const DenseMatrix& a, const DenseMatrix& b) {
    require(a.rows == b.rows, "matmul_tn: shape mismatch " + shape_str(a) + "ᵀ * " + shape_str(b));
    DenseMatrix c(a.cols, b.cols);
    as_eigen(c).noalias() = as_eigen(a).transpose() * as_eigen(b);
    return c;
}

DenseMatrix matmul_nt(const DenseMatrix& a, const DenseMatrix& b) {
    require(a.cols == b.cols, "matmul_nt: shape mismatch " + shape_str(a) + " * " + shape_str(b) + "ᵀ");
    DenseMatrix c(a.rows, b.rows);
    as_eigen(c).noalias() = as_eigen(a) * as_eigen(b).transpose();
    return c;
}

void add_inplace(DenseMatrix& a, const DenseMatrix& b) {
    require(a.same_shape(b), "add_inplace: shape mismatch");
    for (size_t i = 0; i < a.data.size(); ++i) a.data[i] += b.data[i];
}

void axpy_inplace(DenseMatrix& a, double alpha, const DenseMatrix& b) {
    require(a.same_shape(b), "axpy_inplace: shape mismatch");
    for (size_t i = 0; i < a.data.size(); ++i) a.data[i] += alpha * b.data[i];
}

DenseMatrix spmm(const SparseMatrix& a, const DenseMatrix& x) {
    require(a.cols == x.rows, "spmm: sparse cols " + std::to_string(a.cols) +
                                  " != dense rows " + std::to_string(x.rows));
    DenseMatrix y(a.rows, x.cols);
    const Index c = x.cols;
    for (Index i = 0; i < a.rows; ++i) {
        double* out = y.row(i);
        for (Index e = a.row_offsets[i]; e < a.row_offsets[i + 1]; ++e) {
            const double v = a.values[e];
            const double* src = x.row(a.col_indices[e]);
            for (Index k = 0; k < c; ++k) out[k] += v * src[k];
        }
    }
    return y;
}

DenseMatrix affine(const DenseMatrix& x, const ParamTensor& w, const ParamTensor& b) {
    require(b.value.rows == 1 && b.value.cols == w.value.cols, "affine: bias shape mismatch");
    DenseMatrix y = matmul(x, w.value);
    for (Index i = 0; i < y.rows; ++i) {
        double* row = y.row(i);
        for (Index j = 0; j < y.cols; ++j) row[j] += b.value.at(0, j);
    }
    return y;
}

DenseMatrix affine_backward(const DenseMatrix& x, ParamTensor& w, ParamTensor& b,
                            const DenseMatrix& upstream) {
    require(upstream.rows == x.rows && upstream.cols == w.value.cols,
            "affine_backward: upstream shape mismatch");
    as_eigen(w.grad).noalias() += as_eigen(x).transpose() * as_eigen(upstream);
    for (Index i = 0; i < upstream.rows; ++i) {
        const double* row = upstream.row(i);
        for (Index j = 0; j < upstream.cols; ++j) b.grad.at(0, j) += row[j];
    }
    return matmul_nt(upstream, w.value);
}

DenseMatrix elu(const DenseMatrix& x) {
    DenseMatrix y(x.rows, x.cols);
    for (size_t i = 0; i < x.data.size(); ++i) {
        const double v = x.data[i];
        y.data[i] = v > 0.0 ? v : std::expm1(v);
    }
    return y;
}

DenseMatrix elu_backward(const DenseMatrix& pre_activation, const DenseMatrix& upstream) {
    DenseMatrix g(pre_activation.rows, pre_activation.cols);
    for (size_t i = 0; i < g.data.size(); ++i) {
        const double v = pre_activation.data[i];
        g.data[i] = upstream.data[i] * (v > 0.0 ? 1.0 : std::exp(v));
    }
    return g;
}

RowNormalizeCache l2_normalize_rows_cached(const DenseMatrix& x) {
    RowNormalizeCache cache;
    cache.output = DenseMatrix(x.rows, x.cols);
    cache.clamped_norms.resize(x.rows);
    for (Index i = 0; i < x.rows; ++i) {
        const double* src = x.row(i);
        double sq = 0.0;
        for (Index j = 0; j < x.cols; ++j) sq += src[j] * src[j];
        const double norm = std::max(std::sqrt(sq), kNormEps);
        cache.clamped_norms[i] = norm;
        double* dst = cache.output.row(i);
        for (Index j = 0; j < x.cols; ++j) dst[j] = src[j] / norm;
    }
    return cache;
}

DenseMatrix l2_normalize_rows(const DenseMatrix& x) {
    return l2_normalize_rows_cached(x).output;
}

DenseMatrix l2_normalize_rows_backward(const RowNormalizeCache& cache, const DenseMatrix& upstream) {
    const DenseMatrix& y = cache.output;
    DenseMatrix dx(y.rows, y.cols);
    for (Index i = 0; i < y.rows; ++i) {
        const double* yi = y.row(i);
        const double* gi = upstream.row(i);
        double yg = 0.0;
        for (Index j = 0; j < y.cols; ++j) yg += yi[j] * gi[j];
        const double inv = 1.0 / cache.clamped_norms[i];
        double* out = dx.row(i);
        for (Index j = 0; j < y.cols; ++j) out[j] = (gi[j] - yi[j] * yg) * inv;
    }
    return dx;
}

double dot_rows(const DenseMatrix& a, Index i, const DenseMatrix& b, Index j) {
    const double* x = a.row(i);
    const double* y = b.row(j);
    double s = 0.0;
    for (Index k = 0; k < a.cols; ++k) s += x[k] * y[k];
    return s;
}

double spectral_radius(const SparseMatrix& a, int iterations) {
    DenseMatrix v(a.rows, 1);
    for (Index i = 0; i < a.rows; ++i) v.at(i, 0) = 1.0 + 1e-3 * static_cast<double>(i % 17);
    double lambda = 0.0;
    for (int it = 0; it < iterations; ++it) {
        DenseMatrix w = spmm(a, v);
        double nv = 0.0, vw = 0.0;
        for (Index i = 0; i < a.rows; ++i) {
            nv += v.at(i, 0) * v.at(i, 0);
            vw += v.at(i, 0) * w.at(i, 0);
        }
        lambda = nv > 0.0 ? vw / nv : 0.0;
        double nw = 0.0;
        for (Index i = 0; i < a.rows; ++i) nw += w.at(i, 0) * w.at(i, 0);
        nw = std::sqrt(nw);
        if (nw < kNormEps) return 0.0;
        for (Index i = 0; i < a.rows; ++i) v.at(i, 0) = w.at(i, 0) / nw;
    }
    return std::abs(lambda);
}

} // namespace gacl
