#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <vector>

#include "helpers.hpp"
#include "maxvolkit/rect_maxvol.hpp"

using namespace maxvolkit;
using test_helpers::mat;
using test_helpers::random_normal;

namespace {

const DenseMatrix kThreeByTwo = mat({{1, 0}, {0, 1}, {1, 1}});

}  // namespace

TEST_CASE("rect_maxvol stops at K = r when the leftover row is short enough") {
    RectMaxvolOptions opt;
    opt.tau = 1.5;
    opt.min_rows = 2;
    opt.max_rows = 3;
    const SelectionResult res = rect_maxvol(kThreeByTwo, opt);
    REQUIRE(res.row_indices.size() == 2);
    // the one unselected row has coefficient norm sqrt(2) <= tau
    const IndexList rest = complement_indices(3, res.row_indices);
    REQUIRE(rest.size() == 1);
    REQUIRE(std::abs(res.C.row(rest[0]).norm() - std::sqrt(2.0)) < 1e-12);
}

TEST_CASE("rect_maxvol grows to all rows at tau = 1 and yields projector coefficients") {
    RectMaxvolOptions opt;
    opt.tau = 1.0;
    opt.max_rows = 3;
    opt.identity_hat = false;
    const SelectionResult res = rect_maxvol(kThreeByTwo, opt);
    REQUIRE(res.row_indices.size() == 3);
    REQUIRE(res.hat_c_mode == HatMode::projector);

    // minimum-norm C for the full selection is A (A^T A)^{-1} A^T; the
    // columns follow the selection order
    DenseMatrix expected(3, 3);
    expected << 2, -1, 1, -1, 2, 1, 1, 1, 2;
    expected /= 3.0;
    DenseMatrix reordered(3, 3);
    for (std::size_t t = 0; t < res.row_indices.size(); ++t)
        reordered.col(static_cast<Index>(t)) = expected.col(res.row_indices[t]);
    REQUIRE((res.C - reordered).cwiseAbs().maxCoeff() < 1e-12);
    for (Index i = 0; i < 3; ++i)
        REQUIRE(std::abs(res.C.row(i).norm() - std::sqrt(6.0) / 3.0) < 1e-12);
}

TEST_CASE("rect_maxvol with identity hat rewrites selected rows") {
    RectMaxvolOptions opt;
    opt.tau = 1.0;
    opt.max_rows = 3;
    opt.identity_hat = true;
    const SelectionResult res = rect_maxvol(kThreeByTwo, opt);
    REQUIRE(res.row_indices.size() == 3);
    for (std::size_t t = 0; t < res.row_indices.size(); ++t) {
        for (Index j = 0; j < res.C.cols(); ++j) {
            const double want = j == static_cast<Index>(t) ? 1.0 : 0.0;
            REQUIRE(res.C(res.row_indices[t], j) == want);
        }
    }
}

TEST_CASE("rect_maxvol keeps K = r when appended rows are all zero") {
    DenseMatrix a = DenseMatrix::Zero(7, 3);
    a.topRows(3).setIdentity();
    RectMaxvolOptions opt;
    opt.tau = 1.0;
    const SelectionResult res = rect_maxvol(a, opt);
    REQUIRE(res.row_indices.size() == 3);
    REQUIRE(sorted(res.row_indices) == IndexList{0, 1, 2});
}

TEST_CASE("incremental updates match recomputation after every growth step") {
    Pcg32 rng(401);
    for (int rep = 0; rep < 10; ++rep) {
        const DenseMatrix a = random_normal(rng, 60, 6);
        RectMaxvolOptions opt;
        opt.tau = 1.0;
        opt.max_rows = 24;
        int steps = 0;
        opt.on_grow = [&](const GrowthStep& step) {
            ++steps;
            const DenseMatrix fresh = min_norm_coefficients(a, step.rows);
            REQUIRE((step.C - fresh).norm() <= 1e-9 * fresh.norm());
            for (Index i = 0; i < step.C.rows(); ++i)
                REQUIRE(std::abs(step.lengths(i) - step.C.row(i).squaredNorm()) <= 1e-9);
        };
        const SelectionResult res = rect_maxvol(a, opt);
        REQUIRE(steps == static_cast<int>(res.row_indices.size()) - 6);
    }
}

TEST_CASE("squared volume grows by exactly 1 + L_i at each step") {
    Pcg32 rng(402);
    const DenseMatrix a = random_normal(rng, 50, 5);
    RectMaxvolOptions opt;
    opt.tau = 0.8;
    opt.max_rows = 20;
    std::vector<double> picked_lengths;
    opt.on_grow = [&](const GrowthStep& step) { picked_lengths.push_back(step.selected_length_sq); };
    const SelectionResult res = rect_maxvol(a, opt);

    const std::size_t growth = picked_lengths.size();
    REQUIRE(growth >= 1);
    const std::size_t base = res.log_vol2_trace.size() - growth;
    for (std::size_t g = 0; g < growth; ++g) {
        const double log_ratio_sq =
            2.0 * (res.log_vol2_trace[base + g] - res.log_vol2_trace[base + g - 1]);
        const double expected = 1.0 + picked_lengths[g];
        REQUIRE(std::abs(std::exp(log_ratio_sq) - expected) <= 1e-9 * expected);
    }
}

TEST_CASE("spectral structure of the coefficient matrix per hat mode") {
    Pcg32 rng(403);
    for (int rep = 0; rep < 10; ++rep) {
        const DenseMatrix a = random_normal(rng, 40, 6);
        for (bool identity : {true, false}) {
            RectMaxvolOptions opt;
            opt.min_rows = 10;
            opt.max_rows = 10;
            opt.identity_hat = identity;
            const SelectionResult res = rect_maxvol(a, opt);
            REQUIRE(res.row_indices.size() == 10);

            const DenseMatrix hat = select_rows(a, res.row_indices);
            const IndexList rest = complement_indices(40, res.row_indices);
            const DenseMatrix b = select_rows(a, rest);
            const DenseMatrix b_coeff =
                least_squares_min_norm(DenseMatrix(hat.transpose()), DenseMatrix(b.transpose()))
                    .transpose();
            const Vector sigma_b = svd(b_coeff).sigma;
            const Vector sigma_c = svd(res.C).sigma;

            for (Index t = 0; t < 6; ++t) {
                const double expect = std::sqrt(1.0 + sigma_b(t) * sigma_b(t));
                REQUIRE(std::abs(sigma_c(t) - expect) <= 1e-8);
            }
            for (Index t = 6; t < 10; ++t) {
                const double expect = identity ? 1.0 : 0.0;
                REQUIRE(std::abs(sigma_c(t) - expect) <= 1e-8);
            }
        }
    }
}

TEST_CASE("dominant selections satisfy the per-row coefficient bound") {
    Pcg32 rng(404);
    for (int rep = 0; rep < 20; ++rep) {
        const DenseMatrix a = test_helpers::random_uniform(rng, 8, 2);
        const Index k = 3;
        const IndexList best = brute_force_best_rows(a, k);
        const DenseMatrix c = min_norm_coefficients(a, best);
        const double bound = std::sqrt(2.0 / static_cast<double>(k + 1 - 2));
        for (Index i : complement_indices(8, best))
            REQUIRE(c.row(i).norm() <= bound + 1e-12);
    }
}

TEST_CASE("rect_maxvol validates its bounds") {
    RectMaxvolOptions opt;
    opt.min_rows = 1;  // below n_cols
    REQUIRE_THROWS_AS(rect_maxvol(kThreeByTwo, opt), InvalidBoundsError);
    opt.min_rows = 3;
    opt.max_rows = 2;
    REQUIRE_THROWS_AS(rect_maxvol(kThreeByTwo, opt), InvalidBoundsError);
    opt.min_rows = -1;
    opt.max_rows = 99;
    REQUIRE_THROWS_AS(rect_maxvol(kThreeByTwo, opt), InvalidBoundsError);
    REQUIRE_THROWS_AS(rect_maxvol(kThreeByTwo, 0.0), InvalidBoundsError);
    REQUIRE_THROWS_AS(rect_maxvol(mat({{1, 1}, {2, 2}, {3, 3}}), 1.0), RankDeficientError);
}

TEST_CASE("default row cap is 2r + 1") {
    Pcg32 rng(405);
    const DenseMatrix a = random_normal(rng, 200, 4);
    RectMaxvolOptions opt;
    opt.tau = 0.05;  // far below reachable row norms, so the cap binds
    const SelectionResult res = rect_maxvol(a, opt);
    REQUIRE(res.row_indices.size() == 9);
}
