#pragma once

#include "gacl/graph.hpp"

#include <vector>

namespace gacl {

inline constexpr double kNormEps = 1e-12;

/// Row-major dense matrix of 64-bit floats.
struct DenseMatrix {
    Index rows = 0;
    Index cols = 0;
    std::vector<double> data;

    DenseMatrix() = default;
    DenseMatrix(Index r, Index c) : rows(r), cols(c), data(static_cast<size_t>(r) * c, 0.0) {}

    double& at(Index r, Index c) { return data[static_cast<size_t>(r) * cols + c]; }
    double at(Index r, Index c) const { return data[static_cast<size_t>(r) * cols + c]; }

    double* row(Index r) { return data.data() + static_cast<size_t>(r) * cols; }
    const double* row(Index r) const { return data.data() + static_cast<size_t>(r) * cols; }

    bool empty() const { return data.empty(); }
    bool same_shape(const DenseMatrix& o) const { return rows == o.rows && cols == o.cols; }

    void fill(double v) { std::fill(data.begin(), data.end(), v); }
};

/// Trainable tensor: value plus an accumulated gradient of identical shape.
struct ParamTensor {
    DenseMatrix value;
    DenseMatrix grad;

    ParamTensor() = default;
    ParamTensor(Index r, Index c) : value(r, c), grad(r, c) {}
    explicit ParamTensor(DenseMatrix v) : value(std::move(v)), grad(value.rows, value.cols) {}

    void zero_grad() { grad.fill(0.0); }
};

// ---- dense kernels (Eigen-backed GEMM, fixed accumulation order) ----

DenseMatrix matmul(const DenseMatrix& a, const DenseMatrix& b);     // a · b
DenseMatrix matmul_tn(const DenseMatrix& a, const DenseMatrix& b);  // aᵀ · b
DenseMatrix matmul_nt(const DenseMatrix& a, const DenseMatrix& b);  // a · bᵀ

void add_inplace(DenseMatrix& a, const DenseMatrix& b);
void axpy_inplace(DenseMatrix& a, double alpha, const DenseMatrix& b);  // a += alpha·b

/// CSR sparse x dense product; per output element the summation runs in
/// ascending column-index order.
DenseMatrix spmm(const SparseMatrix& a, const DenseMatrix& x);

/// y = x·W + b with b a single broadcast row.
DenseMatrix affine(const DenseMatrix& x, const ParamTensor& w, const ParamTensor& b);

/// Accumulates dW = xᵀ·g and db = column sums of g; returns dx = g·Wᵀ.
DenseMatrix affine_backward(const DenseMatrix& x, ParamTensor& w, ParamTensor& b,
                            const DenseMatrix& upstream);

DenseMatrix elu(const DenseMatrix& x);
DenseMatrix elu_backward(const DenseMatrix& pre_activation, const DenseMatrix& upstream);

/// Forward state of a row normalization, kept for the backward pass.
struct RowNormalizeCache {
    DenseMatrix output;                 // y = x / max(‖x‖, eps), per row
    std::vector<double> clamped_norms;  // max(‖x‖, eps), per row
};

RowNormalizeCache l2_normalize_rows_cached(const DenseMatrix& x);
DenseMatrix l2_normalize_rows(const DenseMatrix& x);

/// Exact Jacobian of y = x/‖x‖ per row with the clamped norm:
/// dx = (g − y·(yᵀg)) / max(‖x‖, eps).
DenseMatrix l2_normalize_rows_backward(const RowNormalizeCache& cache, const DenseMatrix& upstream);

double dot_rows(const DenseMatrix& a, Index i, const DenseMatrix& b, Index j);

/// Largest |eigenvalue| of a symmetric CSR matrix by power iteration.
double spectral_radius(const SparseMatrix& a, int iterations = 500);

} // namespace gacl
