#pragma once

#include <Eigen/Core>
#include <random>
#include <vector>

#include "marx/filter.hpp"
#include "marx/spd.hpp"

namespace marx::testing {

inline Eigen::MatrixXd random_normal(std::mt19937_64& rng, Eigen::Index rows, Eigen::Index cols,
                                     double scale = 1.0) {
    std::normal_distribution<double> n(0.0, scale);
    Eigen::MatrixXd m(rows, cols);
    for (Eigen::Index j = 0; j < cols; ++j)
        for (Eigen::Index i = 0; i < rows; ++i) m(i, j) = n(rng);
    return m;
}

inline Eigen::VectorXd random_vector(std::mt19937_64& rng, Eigen::Index n, double scale = 1.0) {
    return random_normal(rng, n, 1, scale);
}

/// A A^T / n + floor * I for a random square A.
inline SpdMatrix random_spd(std::mt19937_64& rng, Eigen::Index n, double scale = 1.0,
                            double floor = 0.1) {
    const Eigen::MatrixXd a = random_normal(rng, n, n);
    Eigen::MatrixXd m = scale * a * a.transpose() / static_cast<double>(n);
    m.diagonal().array() += floor * scale;
    return SpdMatrix(m);
}

inline Buffers random_buffers(std::mt19937_64& rng, const Dimensions& d, double scale = 0.5) {
    std::vector<Eigen::VectorXd> u, y;
    for (Eigen::Index i = 0; i < d.M_u; ++i) u.push_back(random_vector(rng, d.D_u, scale));
    for (Eigen::Index i = 0; i < d.M_y; ++i) y.push_back(random_vector(rng, d.D_y, scale));
    return Buffers(d, u, y);
}

/// Posterior-like beliefs: moderate coefficients, informative Lambda, nu well
/// above D_y + 2 so every predictive has a covariance.
inline MarxBeliefs random_beliefs(std::mt19937_64& rng, const Dimensions& d) {
    const Eigen::Index dx = d.dim_x();
    std::uniform_real_distribution<double> unif(0.0, 1.0);
    const Eigen::MatrixXd M = random_normal(rng, dx, d.D_y, 0.5);
    const SpdMatrix Lambda = random_spd(rng, dx, 2.0 + 8.0 * unif(rng), 0.2);
    const double nu = static_cast<double>(d.D_y) + 4.0 + 20.0 * unif(rng);
    const SpdMatrix Omega = random_spd(rng, d.D_y, 0.2 * nu, 0.3);
    return MarxBeliefs(MatrixNormalWishart(M, Lambda, Omega, nu), d);
}

}  // namespace marx::testing
