#pragma once

#include <algorithm>
#include <functional>
#include <limits>

#include "maxvolkit/kernels.hpp"
#include "maxvolkit/matrix.hpp"
#include "maxvolkit/maxvol.hpp"

namespace maxvolkit {

/// Snapshot passed to the growth observer after each appended row. C and
/// lengths reflect the working minimum-norm state (identity_hat rewriting, if
/// requested, happens once at exit).
struct GrowthStep {
    const DenseMatrix& C;
    const IndexList& rows;
    const Vector& lengths;        // maintained squared row norms of C
    double selected_length_sq;    // squared norm of the appended row, before the step
};

struct RectMaxvolOptions {
    double tau = 1.0;
    Index min_rows = -1;  // default: n_cols
    Index max_rows = -1;  // default: min(n_rows, 2 * n_cols + 1)
    bool identity_hat = true;
    double eps = 0.05;    // square-stage swap slack
    int max_iters = -1;   // square-stage iteration cap
    std::function<void(const GrowthStep&)> on_grow;
};

/// Greedy rectangular submatrix growth. Starts from the square maxvol
/// selection, then repeatedly appends the unselected row whose coefficient
/// row has the largest squared norm L_i, until max L_i <= tau^2 (but at least
/// min_rows and at most max_rows rows). Each append is a rank-1
/// Sherman-Morrison update of C costing O(N * K); the squared 2-volume of the
/// selected submatrix grows by the factor (1 + L_i).
inline SelectionResult rect_maxvol(const DenseMatrix& a, const RectMaxvolOptions& opt = {}) {
    const Index n = a.rows();
    const Index r = a.cols();
    if (n < r || r < 1)
        throw DimensionError("rect_maxvol: matrix must be tall with at least one column");
    if (opt.tau <= 0.0) throw InvalidBoundsError("rect_maxvol: tau must be positive");
    const Index min_rows = opt.min_rows < 0 ? r : opt.min_rows;
    const Index max_rows = opt.max_rows < 0 ? std::min(n, 2 * r + 1) : opt.max_rows;
    if (min_rows < r || min_rows > max_rows || max_rows > n)
        throw InvalidBoundsError("rect_maxvol: need n_cols <= min_rows <= max_rows <= n_rows");

    SelectionResult res = maxvol(a, opt.eps, opt.max_iters);
    const double tau_sq = opt.tau * opt.tau;

    DenseMatrix work(n, max_rows);
    work.leftCols(r) = res.C;

    Vector lengths(n);
    for (Index i = 0; i < n; ++i) lengths(i) = res.C.row(i).squaredNorm();

    std::vector<bool> selected(static_cast<std::size_t>(n), false);
    for (Index i : res.row_indices) selected[static_cast<std::size_t>(i)] = true;

    Index k = r;
    while (k < max_rows) {
        Index pick = -1;
        double pick_len = -std::numeric_limits<double>::infinity();
        for (Index i = 0; i < n; ++i) {
            if (selected[static_cast<std::size_t>(i)]) continue;
            if (lengths(i) > pick_len) {
                pick_len = lengths(i);
                pick = i;
            }
        }
        if (pick < 0) break;
        if (k >= min_rows && pick_len <= tau_sq) break;

        auto c_view = work.leftCols(k);
        const RowVector pick_row = c_view.row(pick);
        const Vector dots = c_view * pick_row.transpose();
        const double gamma = 1.0 + dots(pick);

        work.col(k) = dots / gamma;
        c_view.noalias() -= (dots / gamma) * pick_row;
        lengths.array() -= dots.array().square() / gamma;

        selected[static_cast<std::size_t>(pick)] = true;
        res.row_indices.push_back(pick);
        ++k;
        ++res.iterations;
        res.log_vol2_trace.push_back(log_vol2(select_rows(a, res.row_indices)));

        if (opt.on_grow) {
            const DenseMatrix c_snap = work.leftCols(k);
            opt.on_grow(GrowthStep{c_snap, res.row_indices, lengths, pick_len});
        }
    }

    res.C = work.leftCols(k);
    if (opt.identity_hat) {
        for (std::size_t t = 0; t < res.row_indices.size(); ++t) {
            res.C.row(res.row_indices[t]).setZero();
            res.C(res.row_indices[t], static_cast<Index>(t)) = 1.0;
        }
        res.hat_c_mode = HatMode::identity;
    } else {
        res.hat_c_mode = HatMode::projector;
    }
    return res;
}

inline SelectionResult rect_maxvol(const DenseMatrix& a, double tau) {
    RectMaxvolOptions opt;
    opt.tau = tau;
    return rect_maxvol(a, opt);
}

}  // namespace maxvolkit
