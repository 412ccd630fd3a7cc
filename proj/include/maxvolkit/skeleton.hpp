#pragma once

#include <algorithm>
#include <cmath>
#include <utility>

#include "maxvolkit/kernels.hpp"
#include "maxvolkit/matrix.hpp"
#include "maxvolkit/maxvol.hpp"
#include "maxvolkit/rect_maxvol.hpp"
#include "maxvolkit/rng.hpp"

namespace maxvolkit {

enum class SelectMethod { square, rect };

inline const char* to_string(SelectMethod m) {
    return m == SelectMethod::square ? "square" : "rect";
}

/// Row selection on a (usually orthonormal) basis matrix by the requested
/// method. tau is ignored for the square method.
inline IndexList select_basis_rows(const DenseMatrix& basis, SelectMethod method, double tau) {
    if (method == SelectMethod::square) return maxvol(basis).row_indices;
    RectMaxvolOptions opt;
    opt.tau = tau;
    return rect_maxvol(basis, opt).row_indices;
}

/// Cross approximation factors: A ~ left_factor * core * right_factor, where
/// left_factor holds the selected columns, right_factor the selected rows and
/// core the pseudo-inverse of their intersection block.
struct SkeletonApprox {
    IndexList row_indices;   // n
    IndexList col_indices;   // m
    DenseMatrix left_factor;   // N x m
    DenseMatrix core;          // m x n
    DenseMatrix right_factor;  // n x M

    DenseMatrix reconstruct() const { return left_factor * core * right_factor; }
};

/// Pick skeleton rows and columns of rank-r structure: rows by (rect_)maxvol
/// on the left singular vectors, then columns by the same method on the
/// transposed selected-row submatrix.
inline std::pair<IndexList, IndexList> select_skeleton(const DenseMatrix& a, Index r,
                                                       SelectMethod method, double tau = 1.0) {
    if (r < 1 || r > std::min(a.rows(), a.cols()))
        throw DimensionError("select_skeleton: need 1 <= r <= min(n_rows, n_cols)");
    const LowRankFactors f = svd(a, r);
    IndexList rows = select_basis_rows(f.U, method, tau);
    const DenseMatrix row_block_t = select_rows(a, rows).transpose();
    IndexList cols = select_basis_rows(row_block_t, method, tau);
    return {std::move(rows), std::move(cols)};
}

/// Assemble the cross approximation on the given row/column index sets.
inline SkeletonApprox build_pseudo_skeleton(const DenseMatrix& a, const IndexList& rows,
                                            const IndexList& cols,
                                            double rcond = kDefaultRcond) {
    SkeletonApprox s;
    s.row_indices = rows;
    s.col_indices = cols;
    s.left_factor = select_cols(a, cols);
    s.right_factor = select_rows(a, rows);
    s.core = pseudo_inverse(select_block(a, rows, cols), rcond);
    return s;
}

struct MaxElement {
    Index row = 0;
    Index col = 0;
    double value = 0.0;
};

/// Estimate the maximum-modulus element of U * diag(sigma) * V^T by selecting
/// rows of U and rows of V (columns of the product) and scanning only the
/// intersection block. Ties go to the first entry in selection scan order.
inline MaxElement find_max_element(const LowRankFactors& f, SelectMethod method,
                                   double tau = 1.0) {
    const IndexList rows = select_basis_rows(f.U, method, tau);
    const IndexList cols = select_basis_rows(f.V, method, tau);
    const DenseMatrix block = select_rows(f.U, rows) * f.sigma.asDiagonal() *
                              select_rows(f.V, cols).transpose();
    MaxElement best;
    double best_mag = -1.0;
    for (Index i = 0; i < block.rows(); ++i) {
        for (Index j = 0; j < block.cols(); ++j) {
            const double mag = std::abs(block(i, j));
            if (mag > best_mag) {
                best_mag = mag;
                best = {rows[static_cast<std::size_t>(i)], cols[static_cast<std::size_t>(j)],
                        block(i, j)};
            }
        }
    }
    return best;
}

/// Random low-rank test factors: U and V are thin Q-factors of matrices with
/// uniform [0,1) entries, sigma has uniform [0,1) values sorted non-increasing
/// (triplets permuted together, so the product is unchanged).
inline LowRankFactors random_low_rank_factors(Pcg32& rng, Index n, Index m, Index rank) {
    auto random_q = [&rng](Index rows, Index cols) {
        Eigen::MatrixXd raw(rows, cols);
        for (Index i = 0; i < rows; ++i)
            for (Index j = 0; j < cols; ++j) raw(i, j) = rng.uniform01();
        Eigen::HouseholderQR<Eigen::MatrixXd> qr(raw);
        Eigen::MatrixXd q = qr.householderQ() * Eigen::MatrixXd::Identity(rows, cols);
        return q;
    };

    LowRankFactors f;
    f.U = random_q(n, rank);
    f.V = random_q(m, rank);
    Vector d(rank);
    for (Index i = 0; i < rank; ++i) d(i) = rng.uniform01();

    std::vector<Index> order(static_cast<std::size_t>(rank));
    for (Index i = 0; i < rank; ++i) order[static_cast<std::size_t>(i)] = i;
    std::stable_sort(order.begin(), order.end(), [&d](Index x, Index y) { return d(x) > d(y); });

    LowRankFactors out;
    out.U.resize(n, rank);
    out.V.resize(m, rank);
    out.sigma.resize(rank);
    for (Index t = 0; t < rank; ++t) {
        const Index src = order[static_cast<std::size_t>(t)];
        out.U.col(t) = f.U.col(src);
        out.V.col(t) = f.V.col(src);
        out.sigma(t) = d(src);
    }
    return out;
}

/// Ratio of the found element magnitude to the true maximum, both read from
/// one shared evaluation of the full product so the ratio is exactly <= 1.
inline double max_element_ratio(const LowRankFactors& f, SelectMethod method, double tau = 1.0) {
    const DenseMatrix full = f.reconstruct();
    const MaxElement found = find_max_element(f, method, tau);
    const double true_max = full.cwiseAbs().maxCoeff();
    return std::abs(full(found.row, found.col)) / true_max;
}

}  // namespace maxvolkit
