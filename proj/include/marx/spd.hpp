#pragma once

#include <Eigen/Cholesky>
#include <Eigen/Core>

namespace marx {

/// Symmetric positive definite matrix with a cached Cholesky factor.
///
/// The input is symmetrized as (X + X^T)/2 before validation. Construction
/// fails with NotPositiveDefinite when the smallest eigenvalue of the
/// symmetrized matrix is below kMinEigenvalue. All solves, inverse
/// quadratic forms and log-determinants go through the factor.
class SpdMatrix {
public:
    static constexpr double kMinEigenvalue = 1e-10;

    explicit SpdMatrix(const Eigen::MatrixXd& m);

    static SpdMatrix identity(Eigen::Index n, double scale = 1.0);

    Eigen::Index size() const { return matrix_.rows(); }
    const Eigen::MatrixXd& matrix() const { return matrix_; }
    const Eigen::LLT<Eigen::MatrixXd>& llt() const { return llt_; }

    /// Lower Cholesky factor L with matrix = L L^T.
    Eigen::MatrixXd lower() const { return llt_.matrixL(); }

    double log_det() const;

    /// matrix^{-1} b
    Eigen::VectorXd solve(const Eigen::VectorXd& b) const { return llt_.solve(b); }
    Eigen::MatrixXd solve(const Eigen::MatrixXd& b) const { return llt_.solve(b); }

    /// b^T matrix^{-1} b
    double inv_quad(const Eigen::VectorXd& b) const;

    Eigen::MatrixXd inverse() const;

private:
    Eigen::MatrixXd matrix_;
    Eigen::LLT<Eigen::MatrixXd> llt_;
};

/// Smallest eigenvalue of (m + m^T)/2.
double min_symmetric_eigenvalue(const Eigen::MatrixXd& m);

}  // namespace marx
