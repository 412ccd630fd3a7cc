#pragma once

#include <chrono>
#include <cmath>

#include "maxvolkit/kernels.hpp"
#include "maxvolkit/matrix.hpp"
#include "maxvolkit/maxvol.hpp"
#include "maxvolkit/rect_maxvol.hpp"
#include "maxvolkit/skeleton.hpp"

namespace maxvolkit {

/// Partition of an overdetermined matrix into basic rows A-hat and non-basic
/// rows B = tilde_c * A-hat, together with the symmetric augmented system
///   Z = [[I, C~], [C~^T, -I]]
/// whose condition number is sqrt(1 + ||C~||_2^2).
struct AugmentedSystem {
    IndexList basic_rows;   // K, in selection order
    DenseMatrix tilde_c;    // (N-K) x K coefficients of the non-basic rows
    HatMode hat_c_mode = HatMode::identity;
    IndexList permutation;  // permutation[p] = original row of stacked [A-hat; B] row p

    Index basis_size() const { return tilde_c.cols(); }
    Index total_rows() const { return tilde_c.rows() + tilde_c.cols(); }

    DenseMatrix assemble_z() const {
        const Index nb = tilde_c.rows();
        const Index k = tilde_c.cols();
        DenseMatrix z = DenseMatrix::Zero(nb + k, nb + k);
        z.topLeftCorner(nb, nb).setIdentity();
        z.topRightCorner(nb, k) = tilde_c;
        z.bottomLeftCorner(k, nb) = tilde_c.transpose();
        z.bottomRightCorner(k, k) = -DenseMatrix::Identity(k, k);
        return z;
    }
};

/// Select basic rows by the requested method and collect the non-basic
/// coefficient block.
inline AugmentedSystem build_augmented(const DenseMatrix& a, SelectMethod method,
                                       double tau = 1.0) {
    SelectionResult sel;
    if (method == SelectMethod::square) {
        sel = maxvol(a);
    } else {
        RectMaxvolOptions opt;
        opt.tau = tau;
        sel = rect_maxvol(a, opt);
    }

    AugmentedSystem sys;
    sys.basic_rows = sel.row_indices;
    sys.hat_c_mode = sel.hat_c_mode;
    const IndexList non_basic = complement_indices(a.rows(), sel.row_indices);
    sys.tilde_c = select_rows(sel.C, non_basic);
    sys.permutation = sel.row_indices;
    sys.permutation.insert(sys.permutation.end(), non_basic.begin(), non_basic.end());
    return sys;
}

/// Condition number of the assembled augmented system, from the closed form
/// sqrt(1 + ||C~||_2^2).
inline double cond_formula(const AugmentedSystem& sys) {
    if (sys.tilde_c.rows() == 0 || sys.tilde_c.cols() == 0) return 1.0;
    const double norm = spectral_norm(sys.tilde_c);
    return std::sqrt(1.0 + norm * norm);
}

struct AugmentedSolve {
    Vector x;
    double residual_norm = 0.0;
    double cond_z = 1.0;
};

/// Least-squares solve of ||A x - b|| through the augmented system: one solve
/// with Z recovers the non-basic residual and A-hat * x, then a small
/// least-squares problem with A-hat recovers x.
inline AugmentedSolve solve_via_augmented(const DenseMatrix& a, const Vector& b,
                                          SelectMethod method, double tau = 1.0) {
    if (b.size() != a.rows())
        throw DimensionError("solve_via_augmented: right-hand side length must match rows of A");
    const AugmentedSystem sys = build_augmented(a, method, tau);
    const Index k = sys.basis_size();
    const Index nb = sys.tilde_c.rows();

    Vector rhs(nb + k);
    for (Index p = 0; p < nb; ++p) rhs(p) = b(sys.permutation[static_cast<std::size_t>(k + p)]);
    for (Index p = 0; p < k; ++p) rhs(nb + p) = -b(sys.permutation[static_cast<std::size_t>(p)]);

    const Vector w = Eigen::PartialPivLU<Eigen::MatrixXd>(sys.assemble_z()).solve(rhs);
    const Vector hat_ax = w.tail(k);

    const DenseMatrix hat = select_rows(a, sys.basic_rows);
    AugmentedSolve out;
    out.x = least_squares_min_norm(hat, hat_ax);
    out.residual_norm = (a * out.x - b).norm();
    out.cond_z = cond_formula(sys);
    return out;
}

struct MethodReport {
    IndexList basic_rows;
    Index basis_size = 0;
    double c_spectral_norm = 0.0;
    double cond_z = 1.0;
    double seconds = 0.0;
};

struct MethodComparison {
    MethodReport square;
    MethodReport rect;
};

namespace detail {

inline MethodReport run_method(const DenseMatrix& a, SelectMethod method, double tau) {
    const auto start = std::chrono::steady_clock::now();
    const AugmentedSystem sys = build_augmented(a, method, tau);
    MethodReport rep;
    rep.basic_rows = sys.basic_rows;
    rep.basis_size = sys.basis_size();
    rep.cond_z = cond_formula(sys);
    // With an identity hat block, ||C||_2 equals cond(Z); report the norm of
    // the full stacked coefficient matrix directly.
    DenseMatrix c_full(sys.total_rows(), sys.basis_size());
    c_full.topRows(sys.basis_size()).setIdentity();
    c_full.bottomRows(sys.tilde_c.rows()) = sys.tilde_c;
    rep.c_spectral_norm = spectral_norm(c_full);
    rep.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    return rep;
}

}  // namespace detail

/// Run both selection pipelines and report basis sizes, coefficient norms and
/// wall times.
inline MethodComparison compare_methods(const DenseMatrix& a, double tau = 1.0) {
    MethodComparison cmp;
    cmp.square = detail::run_method(a, SelectMethod::square, tau);
    cmp.rect = detail::run_method(a, SelectMethod::rect, tau);
    return cmp;
}

}  // namespace maxvolkit
