#pragma once

#include <Eigen/Dense>

#include <algorithm>
#include <string>
#include <vector>

#include "maxvolkit/errors.hpp"

namespace maxvolkit {

// Row-major so that row slices are contiguous; the selection algorithms are
// row-oriented throughout.
using DenseMatrix = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;
using Vector = Eigen::VectorXd;
using RowVector = Eigen::RowVectorXd;
using Index = Eigen::Index;
using IndexList = std::vector<Index>;

inline bool all_finite(const DenseMatrix& a) { return a.allFinite(); }

/// Throws DimensionError on empty matrices and ParseError-free Error on NaN/Inf.
inline void require_finite(const DenseMatrix& a, const std::string& what) {
    if (a.rows() < 1 || a.cols() < 1)
        throw DimensionError(what + ": matrix must have at least one row and one column");
    if (!a.allFinite())
        throw Error(what + ": matrix contains NaN or Inf entries");
}

inline DenseMatrix select_rows(const DenseMatrix& a, const IndexList& rows) {
    DenseMatrix out(static_cast<Index>(rows.size()), a.cols());
    for (Index t = 0; t < out.rows(); ++t) out.row(t) = a.row(rows[static_cast<std::size_t>(t)]);
    return out;
}

inline DenseMatrix select_cols(const DenseMatrix& a, const IndexList& cols) {
    DenseMatrix out(a.rows(), static_cast<Index>(cols.size()));
    for (Index t = 0; t < out.cols(); ++t) out.col(t) = a.col(cols[static_cast<std::size_t>(t)]);
    return out;
}

inline DenseMatrix select_block(const DenseMatrix& a, const IndexList& rows, const IndexList& cols) {
    DenseMatrix out(static_cast<Index>(rows.size()), static_cast<Index>(cols.size()));
    for (Index i = 0; i < out.rows(); ++i)
        for (Index j = 0; j < out.cols(); ++j)
            out(i, j) = a(rows[static_cast<std::size_t>(i)], cols[static_cast<std::size_t>(j)]);
    return out;
}

/// Indices in [0, n) not present in `chosen`, in increasing order.
inline IndexList complement_indices(Index n, const IndexList& chosen) {
    std::vector<bool> taken(static_cast<std::size_t>(n), false);
    for (Index i : chosen) taken[static_cast<std::size_t>(i)] = true;
    IndexList out;
    out.reserve(static_cast<std::size_t>(n) - chosen.size());
    for (Index i = 0; i < n; ++i)
        if (!taken[static_cast<std::size_t>(i)]) out.push_back(i);
    return out;
}

inline IndexList sorted(IndexList v) {
    std::sort(v.begin(), v.end());
    return v;
}

}  // namespace maxvolkit
