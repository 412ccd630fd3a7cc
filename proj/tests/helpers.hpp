#pragma once

#include <initializer_list>

#include "maxvolkit/matrix.hpp"
#include "maxvolkit/rng.hpp"

namespace test_helpers {

inline maxvolkit::DenseMatrix mat(std::initializer_list<std::initializer_list<double>> rows) {
    const auto n = static_cast<maxvolkit::Index>(rows.size());
    const auto m = static_cast<maxvolkit::Index>(rows.begin()->size());
    maxvolkit::DenseMatrix a(n, m);
    maxvolkit::Index i = 0;
    for (const auto& row : rows) {
        maxvolkit::Index j = 0;
        for (double v : row) a(i, j++) = v;
        ++i;
    }
    return a;
}

inline maxvolkit::Vector vec(std::initializer_list<double> values) {
    maxvolkit::Vector v(static_cast<maxvolkit::Index>(values.size()));
    maxvolkit::Index i = 0;
    for (double x : values) v(i++) = x;
    return v;
}

inline maxvolkit::DenseMatrix random_uniform(maxvolkit::Pcg32& rng, maxvolkit::Index n,
                                             maxvolkit::Index m, double lo = -1.0,
                                             double hi = 1.0) {
    maxvolkit::DenseMatrix a(n, m);
    for (maxvolkit::Index i = 0; i < n; ++i)
        for (maxvolkit::Index j = 0; j < m; ++j) a(i, j) = rng.uniform(lo, hi);
    return a;
}

inline maxvolkit::DenseMatrix random_normal(maxvolkit::Pcg32& rng, maxvolkit::Index n,
                                            maxvolkit::Index m) {
    maxvolkit::DenseMatrix a(n, m);
    for (maxvolkit::Index i = 0; i < n; ++i)
        for (maxvolkit::Index j = 0; j < m; ++j) a(i, j) = rng.normal();
    return a;
}

/// Random square orthogonal matrix (Q-factor of a random Gaussian matrix).
inline maxvolkit::DenseMatrix random_orthogonal(maxvolkit::Pcg32& rng, maxvolkit::Index n) {
    const Eigen::MatrixXd raw = random_normal(rng, n, n);
    Eigen::HouseholderQR<Eigen::MatrixXd> qr(raw);
    return Eigen::MatrixXd(qr.householderQ());
}

/// Random matrix of exact rank r with a mild singular-value spread.
inline maxvolkit::DenseMatrix random_rank_r(maxvolkit::Pcg32& rng, maxvolkit::Index n,
                                            maxvolkit::Index m, maxvolkit::Index r) {
    return random_normal(rng, n, r) * random_normal(rng, r, m);
}

}  // namespace test_helpers
