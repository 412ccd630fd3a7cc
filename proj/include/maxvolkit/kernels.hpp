#pragma once

#include <Eigen/Dense>

#include <cmath>
#include <limits>
#include <utility>

#include "maxvolkit/errors.hpp"
#include "maxvolkit/matrix.hpp"

namespace maxvolkit {

/// Relative cutoff for pseudo-inverse singular values, as a fraction of the
/// largest singular value.
inline constexpr double kDefaultRcond = 1e-12;

/// Relative pivot threshold for Gaussian elimination, as a fraction of the
/// largest initial entry magnitude.
inline constexpr double kDefaultPivotTol = 1e-12;

/// Relative slack used when comparing volumes of candidate subsets, so that
/// exact mathematical ties broken only by rounding noise stay ties.
inline constexpr double kVolumeTieSlack = 1e-12;

/// Truncated SVD triple: A ~ U * diag(sigma) * V^T with orthonormal columns
/// in U and V and sigma sorted non-increasing.
struct LowRankFactors {
    DenseMatrix U;
    Vector sigma;
    DenseMatrix V;

    Index rank() const { return sigma.size(); }

    DenseMatrix reconstruct() const { return U * sigma.asDiagonal() * V.transpose(); }

    LowRankFactors truncated(Index k) const {
        LowRankFactors out;
        out.U = U.leftCols(k);
        out.sigma = sigma.head(k);
        out.V = V.leftCols(k);
        return out;
    }
};

namespace detail {

// Column-major copy: Eigen's decompositions are happiest with the default
// layout, and the copy is negligible next to the factorization itself.
inline Eigen::MatrixXd to_col_major(const DenseMatrix& a) { return a; }

inline Eigen::BDCSVD<Eigen::MatrixXd> thin_svd(const DenseMatrix& a) {
    return Eigen::BDCSVD<Eigen::MatrixXd>(to_col_major(a), Eigen::ComputeThinU | Eigen::ComputeThinV);
}

}  // namespace detail

/// 2-volume of a tall matrix: the product of its singular values, computed
/// from the R-diagonal of a Householder QR factorization.
inline double vol2(const DenseMatrix& a) {
    if (a.rows() < a.cols())
        throw DimensionError("vol2: matrix must have at least as many rows as columns");
    Eigen::HouseholderQR<Eigen::MatrixXd> qr(detail::to_col_major(a));
    double v = 1.0;
    for (Index i = 0; i < a.cols(); ++i) v *= std::abs(qr.matrixQR()(i, i));
    return v;
}

/// Natural log of vol2; -inf for an exactly rank-deficient input. Safe against
/// overflow for wide products of singular values.
inline double log_vol2(const DenseMatrix& a) {
    if (a.rows() < a.cols())
        throw DimensionError("log_vol2: matrix must have at least as many rows as columns");
    Eigen::HouseholderQR<Eigen::MatrixXd> qr(detail::to_col_major(a));
    double s = 0.0;
    for (Index i = 0; i < a.cols(); ++i) {
        const double d = std::abs(qr.matrixQR()(i, i));
        if (d == 0.0) return -std::numeric_limits<double>::infinity();
        s += std::log(d);
    }
    return s;
}

/// Pivot rows of Gaussian elimination with partial pivoting, in elimination
/// order. The submatrix on the returned rows is nonsingular. Ties on pivot
/// magnitude go to the smallest row index.
inline IndexList lu_top_rows(const DenseMatrix& a, double pivot_tol = kDefaultPivotTol) {
    const Index n = a.rows();
    const Index r = a.cols();
    if (n < r)
        throw DimensionError("lu_top_rows: matrix must have at least as many rows as columns");

    DenseMatrix work = a;
    const double scale = work.cwiseAbs().maxCoeff();
    const double threshold = pivot_tol * scale;

    IndexList pivots;
    pivots.reserve(static_cast<std::size_t>(r));
    std::vector<bool> used(static_cast<std::size_t>(n), false);

    for (Index col = 0; col < r; ++col) {
        Index best = -1;
        double best_mag = -1.0;
        for (Index row = 0; row < n; ++row) {
            if (used[static_cast<std::size_t>(row)]) continue;
            const double mag = std::abs(work(row, col));
            if (mag > best_mag) {
                best_mag = mag;
                best = row;
            }
        }
        if (best < 0 || best_mag < threshold || best_mag == 0.0)
            throw RankDeficientError("lu_top_rows: no usable pivot in column " + std::to_string(col));
        used[static_cast<std::size_t>(best)] = true;
        pivots.push_back(best);

        const double pivot = work(best, col);
        for (Index row = 0; row < n; ++row) {
            if (used[static_cast<std::size_t>(row)]) continue;
            const double factor = work(row, col) / pivot;
            if (factor != 0.0) work.row(row).tail(r - col) -= factor * work.row(best).tail(r - col);
        }
    }
    return pivots;
}

/// Minimum-Frobenius-norm minimizer X of ||A X - B||_F, via SVD with a
/// relative singular-value cutoff. Rank deficiency is handled by the cutoff.
inline DenseMatrix least_squares_min_norm(const DenseMatrix& a, const DenseMatrix& b,
                                          double rcond = kDefaultRcond) {
    if (a.rows() != b.rows())
        throw DimensionError("least_squares_min_norm: row counts of A and B differ");
    auto svd = detail::thin_svd(a);
    svd.setThreshold(rcond);
    return svd.solve(detail::to_col_major(b));
}

inline Vector least_squares_min_norm(const DenseMatrix& a, const Vector& b,
                                     double rcond = kDefaultRcond) {
    if (a.rows() != b.size())
        throw DimensionError("least_squares_min_norm: row counts of A and b differ");
    auto svd = detail::thin_svd(a);
    svd.setThreshold(rcond);
    return svd.solve(b);
}

/// Thin SVD, optionally truncated to the leading k triplets (k < 0 keeps all).
inline LowRankFactors svd(const DenseMatrix& a, Index k = -1) {
    auto dec = detail::thin_svd(a);
    LowRankFactors f;
    f.U = dec.matrixU();
    f.sigma = dec.singularValues();
    f.V = dec.matrixV();
    if (k >= 0 && k < f.sigma.size()) f = f.truncated(k);
    return f;
}

/// Largest singular value.
inline double spectral_norm(const DenseMatrix& a) {
    if (a.rows() == 0 || a.cols() == 0) return 0.0;
    Eigen::BDCSVD<Eigen::MatrixXd> dec(detail::to_col_major(a));
    return dec.singularValues().size() > 0 ? dec.singularValues()(0) : 0.0;
}

/// Moore-Penrose pseudo-inverse with a relative singular-value cutoff.
inline DenseMatrix pseudo_inverse(const DenseMatrix& a, double rcond = kDefaultRcond) {
    auto dec = detail::thin_svd(a);
    const Vector& s = dec.singularValues();
    const double cutoff = rcond * (s.size() > 0 ? s(0) : 0.0);
    Vector inv = Vector::Zero(s.size());
    for (Index i = 0; i < s.size(); ++i)
        if (s(i) > cutoff && s(i) > 0.0) inv(i) = 1.0 / s(i);
    DenseMatrix out = dec.matrixV() * inv.asDiagonal() * dec.matrixU().transpose();
    return out;
}

/// Minimum-norm coefficient matrix C with C * A(rows,:) ~ A, i.e. A times the
/// pseudo-inverse of the row submatrix.
inline DenseMatrix min_norm_coefficients(const DenseMatrix& a, const IndexList& rows,
                                         double rcond = kDefaultRcond) {
    const DenseMatrix hat = select_rows(a, rows);
    DenseMatrix ct = least_squares_min_norm(DenseMatrix(hat.transpose()),
                                            DenseMatrix(a.transpose()), rcond);
    return ct.transpose();
}

/// Both sides of the determinant identity
///   det(A B) = 1/(M-N) * sum_i det(A_{-i} B_{-i})
/// for A (N x M), B (M x N), M > N, where A_{-i} drops column i of A and
/// B_{-i} drops row i of B. Pure test oracle: the two values must agree.
inline std::pair<double, double> lemma1_sides(const DenseMatrix& a, const DenseMatrix& b) {
    const Index n = a.rows();
    const Index m = a.cols();
    if (b.rows() != m || b.cols() != n)
        throw DimensionError("lemma1_sides: B must be the transposed shape of A");
    if (m <= n) throw DimensionError("lemma1_sides: requires more columns than rows in A");

    const Eigen::MatrixXd lhs_prod = detail::to_col_major(a) * detail::to_col_major(b);
    const double lhs = lhs_prod.determinant();

    double sum = 0.0;
    Eigen::MatrixXd a_drop(n, m - 1);
    Eigen::MatrixXd b_drop(m - 1, n);
    for (Index i = 0; i < m; ++i) {
        Index t = 0;
        for (Index j = 0; j < m; ++j) {
            if (j == i) continue;
            a_drop.col(t) = a.col(j);
            b_drop.row(t) = b.row(j);
            ++t;
        }
        sum += (a_drop * b_drop).determinant();
    }
    return {lhs, sum / static_cast<double>(m - n)};
}

/// True iff no single swap of a selected row for an unselected one increases
/// the 2-volume by more than a factor (1 + tol). Brute force over all swaps;
/// meant for small instances and test oracles.
inline bool is_dominant_2vol(const DenseMatrix& a, const IndexList& rows, double tol) {
    const Index n = a.rows();
    const double base = vol2(select_rows(a, rows));
    const IndexList outside = complement_indices(n, rows);
    IndexList candidate = rows;
    for (std::size_t s = 0; s < rows.size(); ++s) {
        for (Index u : outside) {
            candidate[s] = u;
            if (vol2(select_rows(a, candidate)) > (1.0 + tol) * base) return false;
            candidate[s] = rows[s];
        }
    }
    return true;
}

namespace detail {

inline double binomial_guard(Index n, Index k) {
    double v = 1.0;
    for (Index i = 0; i < k; ++i) {
        v *= static_cast<double>(n - i) / static_cast<double>(i + 1);
        if (v > 1e18) return v;
    }
    return v;
}

}  // namespace detail

/// Exhaustive search for the K-row subset of maximal 2-volume. Ties within a
/// 1e-12 relative slack keep the earlier (lexicographically smaller) subset.
/// Guarded to at most 10^6 subsets.
inline IndexList brute_force_best_rows(const DenseMatrix& a, Index k) {
    const Index n = a.rows();
    if (k < a.cols() || k > n)
        throw DimensionError("brute_force_best_rows: need n_cols <= K <= n_rows");
    if (detail::binomial_guard(n, k) > 1e6)
        throw CombinatorialLimitError("brute_force_best_rows: more than 10^6 subsets");

    IndexList current(static_cast<std::size_t>(k));
    for (Index i = 0; i < k; ++i) current[static_cast<std::size_t>(i)] = i;

    IndexList best;
    double best_log = -std::numeric_limits<double>::infinity();
    const double slack = std::log1p(kVolumeTieSlack);

    while (true) {
        const double lv = log_vol2(select_rows(a, current));
        if (best.empty() || lv > best_log + slack) {
            best = current;
            best_log = lv;
        }
        // next combination in lexicographic order
        Index pos = k - 1;
        while (pos >= 0 && current[static_cast<std::size_t>(pos)] == n - k + pos) --pos;
        if (pos < 0) break;
        ++current[static_cast<std::size_t>(pos)];
        for (Index j = pos + 1; j < k; ++j)
            current[static_cast<std::size_t>(j)] = current[static_cast<std::size_t>(j - 1)] + 1;
    }
    return best;
}

}  // namespace maxvolkit
