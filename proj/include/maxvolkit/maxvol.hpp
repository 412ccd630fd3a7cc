#pragma once

#include <cmath>
#include <vector>

#include "maxvolkit/kernels.hpp"
#include "maxvolkit/matrix.hpp"

namespace maxvolkit {

/// How the rows of C at selected indices are represented.
///   identity:  row t of the selection carries the t-th unit row.
///   projector: minimum-norm coefficients (rows of A times the pseudo-inverse
///              of the selected submatrix).
enum class HatMode { identity, projector };

inline const char* to_string(HatMode m) {
    return m == HatMode::identity ? "identity" : "projector";
}

/// Result of a row-selection run: selected rows (in selection order) and the
/// coefficient matrix C with C * A(rows,:) ~ A.
struct SelectionResult {
    IndexList row_indices;
    DenseMatrix C;  // N x K
    HatMode hat_c_mode = HatMode::identity;
    int iterations = 0;
    bool hit_iteration_limit = false;
    /// log 2-volume of the selected submatrix, recomputed from scratch after
    /// the initial selection and after every subsequent swap or growth step.
    std::vector<double> log_vol2_trace;
};

/// Greedy square submatrix selection: starting from the pivot rows of an LU
/// factorization, swaps single rows while some coefficient exceeds 1 + eps in
/// magnitude. Each swap multiplies the submatrix volume by that coefficient.
///
/// On exit max|C_ij| <= 1 + eps, C = A * inv(A(rows,:)), and the rows of C at
/// selected indices are exact unit rows. If max_iters (default 10 * n_cols)
/// is exhausted first, the result carries hit_iteration_limit = true.
inline SelectionResult maxvol(const DenseMatrix& a, double eps = 0.05, int max_iters = -1) {
    const Index n = a.rows();
    const Index r = a.cols();
    if (n < r) throw DimensionError("maxvol: matrix must have at least as many rows as columns");
    if (eps < 0.0) throw InvalidBoundsError("maxvol: eps must be non-negative");
    if (max_iters < 0) max_iters = static_cast<int>(10 * r);

    SelectionResult res;
    res.row_indices = lu_top_rows(a);
    res.hat_c_mode = HatMode::identity;

    // C = A * inv(A-hat), via the transposed solve inv(A-hat)^T * A^T.
    {
        const DenseMatrix hat = select_rows(a, res.row_indices);
        Eigen::PartialPivLU<Eigen::MatrixXd> lu(Eigen::MatrixXd(hat.transpose()));
        res.C = lu.solve(Eigen::MatrixXd(a.transpose())).transpose();
    }
    for (std::size_t t = 0; t < res.row_indices.size(); ++t) {
        res.C.row(res.row_indices[t]).setZero();
        res.C(res.row_indices[t], static_cast<Index>(t)) = 1.0;
    }
    res.log_vol2_trace.push_back(log_vol2(select_rows(a, res.row_indices)));

    while (true) {
        Index bi = 0, bj = 0;
        double best = -1.0;
        for (Index i = 0; i < n; ++i) {
            for (Index j = 0; j < r; ++j) {
                const double mag = std::abs(res.C(i, j));
                if (mag > best) {
                    best = mag;
                    bi = i;
                    bj = j;
                }
            }
        }
        if (best <= 1.0 + eps) break;
        if (res.iterations >= max_iters) {
            res.hit_iteration_limit = true;
            break;
        }

        // Swap: slot bj now holds row bi. Sherman-Morrison rank-1 update of C.
        const double pivot = res.C(bi, bj);
        const Vector col = res.C.col(bj);
        RowVector row = res.C.row(bi);
        row(bj) -= 1.0;
        res.C.noalias() -= col * (row / pivot);
        res.C.row(bi).setZero();
        res.C(bi, bj) = 1.0;

        res.row_indices[static_cast<std::size_t>(bj)] = bi;
        ++res.iterations;
        res.log_vol2_trace.push_back(log_vol2(select_rows(a, res.row_indices)));
    }
    return res;
}

}  // namespace maxvolkit
